//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero if
//! any criterion fails. Every comparison is exact; there are no tolerances to tune.
//!
//! Set `BLESS_GOLDEN=1` to rewrite the golden renderings instead of comparing.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use artin_bredon::abelian::{normalize, smith_normal_form, AbelianGroup, ExtNat, GroupValue, IntMatrix};
use artin_bredon::artin::{default_class_catalog, ArtinParameters};
use artin_bredon::bhs::{ind_pair_matrix, k_of_laurent};
use artin_bredon::engine::{apply_matrix, compute, k0_corollary_check, render_text, EngineConfig};
use artin_bredon::ktheory::{builtin, finite_field, KTheoryProfile, BUILTIN_NAMES};
use artin_bredon::oracle::{finite_group_map_check, stability_scan, ENUMERATION_LIMIT};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const SEED: u64 = 0x5eed_0005;
const SNF_SAMPLES: usize = 500;
const SNF_MAX_DIM: usize = 6;
const SNF_MAX_ENTRY: i128 = 20;
const ENUM_SAMPLES: usize = 1000;
const ENUM_MAX_ORDER: u64 = 64;
const ENUM_MAX_ENTRY: i128 = 6;
const GCD_SAMPLES: usize = 200;
const ORACLE_K: std::ops::RangeInclusive<usize> = 1..=8;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn g(s: &str) -> GroupValue {
    s.parse().unwrap_or_else(|e| panic!("bad group literal {s:?}: {e}"))
}

fn row(ring: &str, n: i64, q: i64) -> Result<[GroupValue; 4], String> {
    let profile = builtin(ring).map_err(|e| e.to_string())?;
    let params = ArtinParameters::new(n).map_err(|e| e.to_string())?;
    let r = compute(&profile, &params, (q, q), &default_class_catalog(&params), &EngineConfig::default());
    let cell = |i: usize| {
        r.value(i, q)
            .ok_or_else(|| format!("{ring} n={n} q={q}: H_{i} is an error cell"))
    };
    Ok([cell(0)?, cell(1)?, cell(2)?, cell(3)?])
}

/// `(ring, n values, q, expected row)`.
type RowCase<'a> = (&'a str, &'a [i64], i64, [&'a str; 4]);

/// Expected rows are written `[H_0, H_1, H_2, H_3]`.
fn check_rows(cases: &[RowCase]) -> Outcome {
    let mut checked = 0;
    for &(ring, ns, q, want) in cases {
        for &n in ns {
            let got = row(ring, n, q)?;
            for i in 0..4 {
                let w = g(want[i]);
                if !got[i].is_exact() {
                    return Err(format!("{ring} n={n} q={q}: H_{i} = {} is not exact", got[i]));
                }
                if got[i] != w {
                    return Err(format!("{ring} n={n} q={q}: H_{i} = {}, expected {w}", got[i]));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} cells exact and equal"))
}

const WZ: &str = "(+)_{w} Z";
const WZ2: &str = "(+)_{w} Z/2";

fn integers() -> Outcome {
    check_rows(&[
        ("Z", &[3, 4], 0, ["Z", "0", WZ, WZ]),
        ("Z", &[3, 4], 1, ["(+)_{w} Z (+) Z/2", WZ, WZ2, WZ2]),
        ("Z", &[3, 4], 2, [WZ2, WZ2, WZ2, WZ2]),
    ])
}

fn field_of_two() -> Outcome {
    check_rows(&[
        ("F2", &[3, 4], 0, ["Z", "0", WZ, WZ]),
        ("F2", &[3, 4], 1, [WZ, WZ, "0", "0"]),
        ("F2", &[3, 4], 2, ["0", "0", "0", "0"]),
        ("F2", &[3, 4], 3, ["Z/3", "0", "(+)_{w} Z/3", "(+)_{w} Z/3"]),
    ])
}

fn group_rings() -> Outcome {
    const NS: &[i64] = &[3, 4, 5, 6];
    const MIXED: &str = "(+)_{w} Z (+) (+)_{w} Z/2";
    const C4_TORSION: &str = "(+)_{w} Z/2 (+) (+)_{w} Z/4";
    check_rows(&[
        ("Z[C2]", NS, 0, ["Z", "0", WZ, WZ]),
        ("Z[C2]", NS, 1, ["(+)_{w} Z (+) (Z/2)^2", WZ, WZ2, WZ2]),
        ("Z[C2xC2]", NS, 0, [MIXED, MIXED, WZ, WZ]),
        ("Z[C2xC2]", NS, 1, [MIXED, MIXED, WZ2, WZ2]),
        ("Z[C4]", NS, 0, [MIXED, MIXED, WZ, WZ]),
        ("Z[C4]", NS, 1, ["(+)_{w} Z (+) (+)_{w} Z/2 (+) Z/4", MIXED, C4_TORSION, C4_TORSION]),
    ])
}

fn k0_corollary() -> Outcome {
    let mut runs = 0;
    for ring in ["Z", "F2"] {
        let profile = builtin(ring).map_err(|e| e.to_string())?;
        let k0 = profile.get_k(0).map_err(|e| e.to_string())?;
        for n in 3..=6 {
            let params = ArtinParameters::new(n).map_err(|e| e.to_string())?;
            let c = k0_corollary_check(&profile, &params, &default_class_catalog(&params))
                .map_err(|e| format!("{ring} n={n}: {e}"))?;
            if !c.holds {
                return Err(format!("{ring} n={n}: {}", c.failures.join("; ")));
            }
            if c.corner != k0 {
                return Err(format!("{ring} n={n}: corner {} is not K_0 = {k0}", c.corner));
            }
            runs += 1;
        }
    }
    Ok(format!("{runs} runs, corner = K_0(R), negative rows zero, columns 0..3"))
}

fn oracle_equivalence() -> Outcome {
    let mut scans = 0;
    for ring in ["Z", "F2", "Z[C2]"] {
        let profile = builtin(ring).map_err(|e| e.to_string())?;
        for n in [3, 4] {
            let params = ArtinParameters::new(n).map_err(|e| e.to_string())?;
            let catalog = default_class_catalog(&params);
            for q in [0, 1] {
                let r = stability_scan(&profile, q, &params, &catalog, ORACLE_K, &EngineConfig::default())
                    .map_err(|e| format!("{ring} n={n} q={q}: {e}"))?;
                if !r.all_match() {
                    return Err(r.to_text());
                }
                let mono = r
                    .cells
                    .iter()
                    .find(|c| c.cell == "ker g2^0 = 0")
                    .ok_or("monomorphism cell missing")?;
                if mono.per_k.len() != ORACLE_K.count() || mono.per_k.iter().any(|(_, o, _)| !o.is_zero()) {
                    return Err(format!("{ring} n={n} q={q}: g2^0 truncation has a kernel"));
                }
                scans += 1;
            }
        }
    }
    Ok(format!("{scans} scans over k = 1..8 match, g2^0 injective"))
}

fn random_matrix(rng: &mut StdRng, rows: usize, cols: usize, bound: i128) -> IntMatrix {
    let data: Vec<Vec<i128>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect();
    IntMatrix::from_rows(&data)
}

fn random_small_group(rng: &mut StdRng) -> AbelianGroup {
    let mut order = 1;
    let mut g = AbelianGroup::zero();
    loop {
        let o = rng.gen_range(2..=16u64);
        if order * o > ENUM_MAX_ORDER || (!g.is_zero() && rng.gen_bool(0.4)) {
            break;
        }
        order *= o;
        g = g.direct_sum(&AbelianGroup::cyclic(o));
    }
    if g.is_zero() {
        g = AbelianGroup::cyclic(2);
    }
    g
}

fn cyclic_or_zero(n: u64) -> AbelianGroup {
    if n == 1 {
        AbelianGroup::zero()
    } else {
        normalize(&[(n as i128, ExtNat::ONE)]).unwrap()
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn algebra() -> Outcome {
    let mut rng = StdRng::seed_from_u64(SEED);
    for s in 0..SNF_SAMPLES {
        let (r, c) = (rng.gen_range(1..=SNF_MAX_DIM), rng.gen_range(1..=SNF_MAX_DIM));
        let m = random_matrix(&mut rng, r, c, SNF_MAX_ENTRY);
        let snf = smith_normal_form(&m);
        let (u, v) = (snf.u.as_ref().unwrap(), snf.v.as_ref().unwrap());
        let chain = snf.d.windows(2).all(|w| w[0] >= 0 && (w[1] == 0 || (w[0] != 0 && w[1] % w[0] == 0)));
        let prod = u.mul(&m).mul(v);
        let diag = (0..r).all(|i| (0..c).all(|j| prod.get(i, j) == if i == j { snf.d[i] } else { 0 }));
        if !chain || !diag || u.determinant().abs() != 1 || v.determinant().abs() != 1 {
            return Err(format!("SNF sample {s} fails on {m}"));
        }
    }
    for s in 0..ENUM_SAMPLES {
        let k = random_small_group(&mut rng);
        let order = k.order().unwrap() as u64;
        let mut max_dim = 1;
        while order.pow(max_dim + 1) <= ENUMERATION_LIMIT && max_dim < 3 {
            max_dim += 1;
        }
        let (r, c) = (rng.gen_range(1..=max_dim as usize), rng.gen_range(1..=max_dim as usize));
        let m = random_matrix(&mut rng, r, c, ENUM_MAX_ENTRY);
        match finite_group_map_check(&m, &k) {
            Ok(true) => {}
            Ok(false) => return Err(format!("enumeration sample {s}: {m} on {k} disagrees")),
            Err(e) => return Err(format!("enumeration sample {s}: {e}")),
        }
    }
    for s in 0..GCD_SAMPLES {
        let (a, b) = (rng.gen_range(1..=500u64), rng.gen_range(1..=500u64));
        let (ga, gb, d) = (cyclic_or_zero(a), cyclic_or_zero(b), cyclic_or_zero(gcd(a, b)));
        let t = ga.tensor(&gb).map_err(|e| e.to_string())?;
        if t != d || ga.tor(&gb) != d {
            return Err(format!("gcd sample {s}: Z/{a}, Z/{b}"));
        }
    }
    Ok(format!(
        "{SNF_SAMPLES} SNF, {ENUM_SAMPLES} enumerations, {GCD_SAMPLES} gcd pairs, seed {SEED:#x}"
    ))
}

fn regular_profiles() -> Vec<KTheoryProfile> {
    let mut out: Vec<_> = BUILTIN_NAMES
        .iter()
        .map(|n| builtin(n).unwrap())
        .filter(|p| p.is_regular())
        .collect();
    out.extend([3, 4, 9].map(|q| finite_field(q).unwrap()));
    out
}

fn bhs_specialization() -> Outcome {
    let mut checked = 0;
    for p in regular_profiles() {
        let (lo, hi) = p.q_range();
        for q in lo + 1..=hi {
            let d = k_of_laurent(&p, q).map_err(|e| e.to_string())?;
            let (kq, km1) = (p.get_k(q).unwrap(), p.get_k(q - 1).unwrap());
            if d.total != kq.direct_sum(&km1) {
                return Err(format!("{} q={q}: K_q(R[t,1/t]) = {}", p.name(), d.total));
            }
            for n in [3, 5, 7] {
                let (_, coker) = apply_matrix(&ind_pair_matrix(n), &km1).map_err(|e| e.to_string())?;
                if coker != km1 {
                    return Err(format!("{} q={q} n={n}: coker = {coker}, K_(q-1) = {km1}", p.name()));
                }
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} (ring, q) pairs"))
}

/// The rendered example tables kept as golden files.
pub const GOLDEN_CASES: &[(&str, &str, i64, (i64, i64))] = &[
    ("integers_n3", "Z", 3, (0, 2)),
    ("integers_n4", "Z", 4, (0, 2)),
    ("f2_n3", "F2", 3, (0, 3)),
    ("f2_n4", "F2", 4, (0, 3)),
    ("zc2_n3", "Z[C2]", 3, (0, 1)),
    ("zc2_n4", "Z[C2]", 4, (0, 1)),
    ("zc2xc2_n3", "Z[C2xC2]", 3, (0, 1)),
    ("zc2xc2_n4", "Z[C2xC2]", 4, (0, 1)),
    ("zc4_n3", "Z[C4]", 3, (0, 1)),
    ("zc4_n4", "Z[C4]", 4, (0, 1)),
];

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn render(ring: &str, n: i64, range: (i64, i64)) -> String {
    let params = ArtinParameters::new(n).unwrap();
    let r = compute(&builtin(ring).unwrap(), &params, range, &default_class_catalog(&params), &EngineConfig::default());
    render_text(&r)
}

fn determinism() -> Outcome {
    let bless = std::env::var_os("BLESS_GOLDEN").is_some();
    for &(name, ring, n, range) in GOLDEN_CASES {
        let first = render(ring, n, range);
        if render(ring, n, range) != first {
            return Err(format!("{name}: two runs differ"));
        }
        let path = golden_dir().join(format!("{name}.txt"));
        if bless {
            std::fs::create_dir_all(golden_dir()).map_err(|e| e.to_string())?;
            std::fs::write(&path, &first).map_err(|e| e.to_string())?;
            continue;
        }
        let want = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        if want != first {
            return Err(format!("{name}: output differs from {}", path.display()));
        }
    }
    Ok(format!("{} renderings byte-identical to golden files", GOLDEN_CASES.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("integer coefficients", integers),
        ("coefficients in F2", field_of_two),
        ("group rings Z[C2], Z[C2xC2], Z[C4]", group_rings),
        ("K_0 corollary", k0_corollary),
        ("oracle equivalence", oracle_equivalence),
        ("algebra substrate", algebra),
        ("Bass-Heller-Swan specialization", bhs_specialization),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
