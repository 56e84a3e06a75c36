use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use artin_bredon::engine::{parse_records, render_text};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden").join(format!("{name}.txt"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_artin-bredon"))
        .args(args)
        .env_remove("ARTIN_BREDON_PROFILE_PATH")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn compute_matches_golden_renderings() {
    let cases = [
        ("integers_n3", "Z", "3", "0..2"),
        ("integers_n4", "Z", "4", "0..2"),
        ("f2_n3", "F2", "3", "0..3"),
        ("f2_n4", "F2", "4", "0..3"),
        ("zc2_n3", "Z[C2]", "3", "0..1"),
        ("zc2_n4", "Z[C2]", "4", "0..1"),
        ("zc2xc2_n3", "Z[C2xC2]", "3", "0..1"),
        ("zc2xc2_n4", "Z[C2xC2]", "4", "0..1"),
        ("zc4_n3", "Z[C4]", "3", "0..1"),
        ("zc4_n4", "Z[C4]", "4", "0..1"),
    ];
    for (name, ring, n, q) in cases {
        let o = run(&["compute", "--ring", ring, "--n", n, "--q", q]);
        assert_eq!(o.status.code(), Some(0), "{name}");
        assert_eq!(stdout(&o), golden(name), "{name}");
    }
}

#[test]
fn records_round_trip_to_text() {
    for (ring, n, q) in [("Z", "3", "0..2"), ("Z[C4]", "4", "0..1"), ("F2", "5", "-1..3")] {
        let text = stdout(&run(&["compute", "--ring", ring, "--n", n, "--q", q]));
        let records = stdout(&run(&["compute", "--ring", ring, "--n", n, "--q", q, "--format", "records"]));
        let parsed = parse_records(&records).unwrap();
        assert_eq!(render_text(&parsed), text, "{ring}");
    }
}

#[test]
fn group_ring_row() {
    let o = run(&["compute", "--ring", "Z[C2]", "--n", "5", "--q", "1", "--format", "records"]);
    let line = stdout(&o).lines().find(|l| l.starts_with("0\t1\t")).unwrap().to_string();
    assert!(line.starts_with("0\t1\t(+)_{w} Z (+) (Z/2)^2\texact"), "{line}");
}

#[test]
fn negative_degrees_vanish_for_regular_rings() {
    let o = run(&["compute", "--ring", "Z", "--n", "3", "--q", "-5", "--format", "records"]);
    assert_eq!(o.status.code(), Some(0));
    let cells: Vec<String> = stdout(&o).lines().filter(|l| !l.starts_with('#')).map(String::from).collect();
    assert_eq!(cells.len(), 4);
    assert!(cells.iter().all(|l| l.split('\t').nth(2) == Some("0")));
}

#[test]
fn e2_pages() {
    let o = run(&["e2page", "--ring", "Z", "--n", "3", "--q", "0..2"]);
    let out = stdout(&o);
    assert!(out.contains("q\\p  0"));
    assert!(out.contains("columns p >= 4 vanish"));
    let o = run(&["e2page", "--ring", "F2", "--n", "4", "--q", "0..3", "--format", "records"]);
    let zero_rows = stdout(&o)
        .lines()
        .filter(|l| l.starts_with(|c: char| c.is_ascii_digit()))
        .filter(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            (f[1] == "1" || f[1] == "2") && f[2] == "0"
        })
        .count();
    // q = 2 is zero in every column, q = 1 in columns 2 and 3
    assert_eq!(zero_rows, 6);
    let o = run(&["e2page", "--ring", "Z", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("n = 2: A_2 = Z^2 is abelian"));
}

#[test]
fn oracle_runs() {
    let o = run(&["oracle", "--ring", "Z", "--n", "3", "--q", "0", "--k", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().skip(1).all(|l| l.contains("stable, matches")), "{out}");
    let o = run(&["oracle", "--ring", "F2", "--n", "4", "--q", "1", "--format", "records"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("H_3 = ker g2^2\t8\t0\t0\tmatch"));
}

#[test]
fn profiles() {
    let o = run(&["profiles", "show", "Z"]);
    let out = stdout(&o);
    assert!(out.contains(" 3  Z/16 (+) Z/3"), "{out}");
    assert!(stdout(&run(&["profiles", "list"])).contains("Z[C2xC2]"));
    let bad = data("bad_regular.toml");
    let o = run(&["profiles", "validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("regular ring must have zero negative K"));
    let good = data("finite_nil.toml");
    assert_eq!(run(&["profiles", "validate", good.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn profile_search_path() {
    let o = Command::new(env!("CARGO_BIN_EXE_artin-bredon"))
        .args(["compute", "--ring", "finite_nil", "--n", "3", "--q", "1"])
        .env("ARTIN_BREDON_PROFILE_PATH", data(""))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("finite-nil"));
}

#[test]
fn exit_statuses() {
    let nil = data("finite_nil.toml");
    let center = data("center_only.toml");
    let o = run(&[
        "compute",
        "--ring",
        nil.to_str().unwrap(),
        "--n",
        "3",
        "--q",
        "0",
        "--catalog",
        center.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["compute", "--ring", "Z[C2]", "--n", "3", "--q", "2"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("K_2(Z[C2]) is out of the declared range"));
    assert_eq!(run(&["compute", "--ring", "Q", "--n", "3", "--q", "0"]).status.code(), Some(3));
    assert_eq!(run(&["compute", "--ring", "Z", "--n", "1", "--q", "0"]).status.code(), Some(3));
    assert_eq!(run(&["compute", "--ring", "Z", "--n", "3", "--q", "2..1"]).status.code(), Some(3));
    assert_eq!(run(&["compute", "--ring", "Z", "--n", "3"]).status.code(), Some(3));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = ["e2page", "--ring", "Z[C4]", "--n", "6", "--q", "-1..1", "--format", "latex"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
