//! `artin-bredon`: Bredon homology tables, E² pages, oracle runs and profile tools.
//!
//! Exit status: 0 success, 2 some cells are only bounded, 3 input error, 4 a degree
//! outside the profile's range, 1 an oracle mismatch.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use artin_bredon::artin::{default_class_catalog, load_catalog, ArtinParameters, ClassCatalog};
use artin_bredon::engine::{
    bredon_vc, compute, e2_page, render_latex, render_records, render_text, CenterSign, EngineConfig,
    HomologyReport,
};
use artin_bredon::ktheory::{builtin, load_profile, KTheoryProfile, BUILTIN_NAMES};
use artin_bredon::oracle::{stability_scan, Verdict};
use clap::{Parser, Subcommand, ValueEnum};

/// Colon-separated directories searched for profile files.
const PROFILE_PATH_VAR: &str = "ARTIN_BREDON_PROFILE_PATH";

const EXIT_MISMATCH: u8 = 1;
const EXIT_BOUNDED: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_RANGE: u8 = 4;

#[derive(Parser)]
#[command(name = "artin-bredon", version, about = "Bredon homology of dihedral Artin groups with K-theory coefficients")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// H_i^vc(A_n; K_q(R[-])) for i = 0..3, one row per q.
    Compute {
        #[command(flatten)]
        args: TableArgs,
        /// Degree q or inclusive range a..b.
        #[arg(long, allow_hyphen_values = true)]
        q: String,
    },
    /// The E2 page of the equivariant Atiyah-Hirzebruch spectral sequence.
    E2page {
        #[command(flatten)]
        args: TableArgs,
        /// Inclusive range a..b; defaults to the profile's declared range.
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
    },
    /// Compare the closed forms with explicit truncated matrices.
    Oracle {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        n: i64,
        #[arg(long, allow_hyphen_values = true)]
        q: i64,
        /// Largest number of classes in a truncation.
        #[arg(long, default_value_t = 8)]
        k: usize,
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List, show or validate K-theory profiles.
    Profiles {
        #[command(subcommand)]
        action: ProfilesAction,
    },
}

#[derive(Subcommand)]
enum ProfilesAction {
    List,
    Show { ring: String },
    Validate { file: PathBuf },
}

#[derive(clap::Args)]
struct TableArgs {
    /// Builtin ring name or profile file.
    #[arg(long)]
    ring: String,
    #[arg(long, allow_hyphen_values = true)]
    n: i64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Class catalog file; the default catalog is used otherwise.
    #[arg(long)]
    catalog: Option<PathBuf>,
    /// Sign of the second center component of g2^1 for even n.
    #[arg(long, value_enum, default_value_t = Sign::Plus)]
    center_sign: Sign,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Records,
    #[value(alias = "tablemarkup")]
    Latex,
}

#[derive(Clone, Copy, ValueEnum)]
enum Sign {
    Plus,
    Minus,
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

fn input(message: impl ToString) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.to_string(),
    }
}

fn parse_range(s: &str) -> Result<(i64, i64), Failure> {
    let parse = |t: &str| {
        t.trim()
            .parse::<i64>()
            .map_err(|_| input(format!("invalid degree `{t}` in `{s}`")))
    };
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b)?),
        None => {
            let q = parse(s)?;
            (q, q)
        }
    };
    if a > b {
        return Err(input(format!("empty range `{s}`")));
    }
    Ok((a, b))
}

/// Builtins first, then a file path, then the search path.
fn resolve_ring(name: &str) -> Result<KTheoryProfile, Failure> {
    if let Ok(p) = builtin(name) {
        return Ok(p);
    }
    let mut candidates = vec![PathBuf::from(name)];
    if let Some(dirs) = std::env::var_os(PROFILE_PATH_VAR) {
        for dir in std::env::split_paths(&dirs) {
            candidates.push(dir.join(name));
            candidates.push(dir.join(format!("{name}.toml")));
        }
    }
    match candidates.iter().find(|p| p.is_file()) {
        Some(path) => load_profile_file(path),
        None => Err(input(format!(
            "unknown ring `{name}`: not a builtin, a file, or a profile in ${PROFILE_PATH_VAR}"
        ))),
    }
}

fn load_profile_file(path: &Path) -> Result<KTheoryProfile, Failure> {
    let src = std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    load_profile(&src).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn params(n: i64) -> Result<ArtinParameters, Failure> {
    ArtinParameters::new(n).map_err(input)
}

fn catalog(path: Option<&Path>, params: &ArtinParameters) -> Result<ClassCatalog, Failure> {
    match path {
        None => Ok(default_class_catalog(params)),
        Some(p) => {
            let src = std::fs::read_to_string(p).map_err(|e| input(format!("{}: {e}", p.display())))?;
            load_catalog(&src, params).map_err(|e| input(format!("{}: {e}", p.display())))
        }
    }
}

fn render(r: &HomologyReport, format: Format) -> String {
    match format {
        Format::Text => render_text(r),
        Format::Records => render_records(r),
        Format::Latex => render_latex(r),
    }
}

fn table(args: &TableArgs, range: Option<&str>, e2: bool) -> Result<(String, u8), Failure> {
    let profile = resolve_ring(&args.ring)?;
    let params = params(args.n)?;
    let catalog = catalog(args.catalog.as_deref(), &params)?;
    let range = match range {
        Some(s) => parse_range(s)?,
        None => profile.q_range(),
    };
    let config = EngineConfig {
        center_sign: match args.center_sign {
            Sign::Plus => CenterSign::Plus,
            Sign::Minus => CenterSign::Minus,
        },
    };
    let report = if e2 {
        e2_page(&profile, &params, range, &catalog, &config)
    } else {
        compute(&profile, &params, range, &catalog, &config)
    };
    let mut code = 0;
    if report.has_errors() {
        let range_error = (range.0..=range.1)
            .filter_map(|q| bredon_vc(&profile, q, &params, &catalog, &config).err())
            .any(|e| e.is_range_error());
        code = if range_error { EXIT_RANGE } else { EXIT_INPUT };
    } else if report.has_bounded() {
        code = EXIT_BOUNDED;
    }
    Ok((render(&report, args.format), code))
}

#[allow(clippy::too_many_arguments)]
fn oracle(
    ring: &str,
    n: i64,
    q: i64,
    k: usize,
    catalog_path: Option<&Path>,
    format: Format,
) -> Result<(String, u8), Failure> {
    let profile = resolve_ring(ring)?;
    let params = params(n)?;
    let catalog = catalog(catalog_path, &params)?;
    if k == 0 {
        return Err(input("--k must be at least 1"));
    }
    let report = stability_scan(&profile, q, &params, &catalog, 1..=k, &EngineConfig::default())
        .map_err(|e| Failure {
            code: if e.is_range_error() { EXIT_RANGE } else { EXIT_INPUT },
            message: e.to_string(),
        })?;
    let code = if report.cells.iter().any(|c| matches!(c.verdict, Verdict::Mismatch { .. })) {
        EXIT_MISMATCH
    } else if report.cells.iter().any(|c| matches!(c.verdict, Verdict::Skipped(_))) {
        EXIT_BOUNDED
    } else {
        0
    };
    let out = match format {
        Format::Records => report.to_records(),
        _ => report.to_text(),
    };
    Ok((out, code))
}

fn show_profile(p: &KTheoryProfile) -> String {
    let mut out = String::new();
    let (lo, hi) = p.q_range();
    writeln!(out, "profile {}", p.name()).unwrap();
    writeln!(out, "regular: {}", if p.is_regular() { "yes" } else { "no" }).unwrap();
    writeln!(out, "q range: {lo}..{hi}").unwrap();
    writeln!(out).unwrap();
    let rows: Vec<[String; 3]> = std::iter::once(["q".into(), "K_q".into(), "NK_q".into()])
        .chain(p.entries().map(|(q, k, nk)| [q.to_string(), k.render(), nk.render()]))
        .collect();
    let w0 = rows.iter().map(|r| r[0].len()).max().unwrap_or(0);
    let w1 = rows.iter().map(|r| r[1].len()).max().unwrap_or(0);
    for r in &rows {
        let line = format!("{:>w0$}  {:<w1$}  {}", r[0], r[1], r[2]);
        writeln!(out, "{}", line.trim_end()).unwrap();
    }
    if !p.notes().is_empty() {
        writeln!(out, "\nnotes:").unwrap();
        for (k, v) in p.notes() {
            writeln!(out, "  {k}: {v}").unwrap();
        }
    }
    out
}

fn profiles(action: &ProfilesAction) -> Result<(String, u8), Failure> {
    match action {
        ProfilesAction::List => {
            let mut out = String::new();
            for name in BUILTIN_NAMES {
                writeln!(out, "{name}").unwrap();
            }
            writeln!(out, "F<q> for any prime power q, e.g. F4, F9").unwrap();
            if let Some(dirs) = std::env::var_os(PROFILE_PATH_VAR) {
                let mut files = Vec::new();
                for dir in std::env::split_paths(&dirs) {
                    if let Ok(rd) = std::fs::read_dir(&dir) {
                        for e in rd.flatten() {
                            if e.path().extension().is_some_and(|x| x == "toml") {
                                files.push(e.path());
                            }
                        }
                    }
                }
                files.sort();
                for f in files {
                    writeln!(out, "{}", f.display()).unwrap();
                }
            }
            Ok((out, 0))
        }
        ProfilesAction::Show { ring } => Ok((show_profile(&resolve_ring(ring)?), 0)),
        ProfilesAction::Validate { file } => {
            let p = load_profile_file(file)?;
            Ok((format!("{}: valid profile `{}`\n", file.display(), p.name()), 0))
        }
    }
}

fn run(cli: &Cli) -> Result<(String, u8), Failure> {
    match &cli.command {
        Command::Compute { args, q } => table(args, Some(q), false),
        Command::E2page { args, q } => table(args, q.as_deref(), true),
        Command::Oracle {
            ring,
            n,
            q,
            k,
            catalog,
            format,
        } => oracle(ring, *n, *q, *k, catalog.as_deref(), *format),
        Command::Profiles { action } => profiles(action),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
