//! Command line front end. [`run`] parses arguments, dispatches to the
//! library and maps outcomes to exit codes: 0 on success, 1 when a
//! computation finishes but the mathematical claim fails, 2 on bad usage or
//! unreadable input.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds::{self, BoundCheck, Method, VerifyConfig};
use crate::covering::{self, ContinuousLift, CoveringVerdict, DEFAULT_RESOLUTION};
use crate::error::{Error, Result};
use crate::lattice::{IntegerLattice, LatticeFile};
use crate::rational::Rational;
use crate::report::{emit_report, emit_text, to_csv, to_stable_json};
use crate::search::{self, SearchOptions, SearchReport, SearchReportJson};
use crate::tile::build_tile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "simplex-cover", version, about = "Cayley tiles, simplex lattice coverings and degree-diameter search")]
struct Cli {
    /// Worker threads for parallel steps (default: SIMPLEX_COVER_THREADS or all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the Cayley tile of a lattice.
    Tile(TileArgs),
    /// Decide whether the discrete simplex of radius d plus the lattice covers Z^n.
    Cover(CoverArgs),
    /// Minimum covering density for a range of radii, as CSV.
    DensityTable(DensityArgs),
    /// Exhaustive search for f(n, d).
    SearchF(SearchArgs),
    /// Check the four-dimensional volume estimates numerically and exactly.
    VerifyBounds(VerifyArgs),
    /// Tabulate the density lower bounds and the general upper bound on f(n, d).
    ThetaBounds(ThetaArgs),
}

#[derive(Args, Debug)]
struct TileArgs {
    /// JSON lattice file: {"n": N, "basis": [[...], ...]}.
    #[arg(long)]
    lattice: PathBuf,
    #[arg(long, conflicts_with = "ascii")]
    json: bool,
    /// Character grid, 2-D only.
    #[arg(long)]
    ascii: bool,
}

#[derive(Args, Debug)]
struct CoverArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: u64,
    #[arg(long)]
    lattice: PathBuf,
    /// Also lift to a continuous covering and probe it on a rational grid.
    #[arg(long)]
    continuous: bool,
    /// Grid points per unit length for the continuous probe.
    #[arg(long, default_value_t = DEFAULT_RESOLUTION, requires = "continuous")]
    resolution: u32,
}

#[derive(Args, Debug)]
struct DensityArgs {
    #[arg(long)]
    n: usize,
    /// Inclusive range of radii, `A..B`.
    #[arg(long, value_parser = parse_range)]
    d_range: (u64, u64),
    #[arg(long)]
    index_cap: Option<u64>,
    /// Search reports to compare against; a differing f for the same (n, d) fails.
    #[arg(long, num_args = 1..)]
    baseline: Vec<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: u64,
    /// Start the downward scan at this index instead of the proven bound.
    #[arg(long)]
    index_cap: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Mc,
    Quad,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value = "1", value_parser = parse_rational)]
    d_star: Rational,
    /// Single notch coordinate; by default 0, d*/8, d*/7 and d*/4 are checked.
    #[arg(long, value_parser = parse_rational)]
    v: Option<Rational>,
    /// Monte Carlo samples, or quadrature nodes per axis with `--method quad`.
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long, default_value_t = bounds::DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value = "mc")]
    method: MethodArg,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ThetaArgs {
    /// Largest dimension in the table.
    #[arg(long, default_value_t = 6)]
    n_max: usize,
    /// Inclusive range of radii for the upper bound on f(n, d), `A..B`.
    #[arg(long, value_parser = parse_range, default_value = "0..10")]
    d_range: (u64, u64),
    #[arg(long)]
    json: bool,
}

fn parse_range(s: &str) -> std::result::Result<(u64, u64), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected A..B, got {s:?}"))?;
    let a: u64 = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b: u64 = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok((a, b))
}

fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let threads = cli.threads.or_else(search::threads_from_env);
    // Output is buffered so the command can run inside a rayon pool.
    let mut out = Vec::new();
    let mut err = Vec::new();
    let outcome = match threads {
        Some(0) => Err(Error::InvalidArgument("--threads must be positive".into())),
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| dispatch(cli.command, &mut out, &mut err)),
            Err(e) => Err(Error::InvalidArgument(e.to_string())),
        },
        None => dispatch(cli.command, &mut out, &mut err),
    };
    if stdout.write_all(&out).and_then(|_| stdout.flush()).is_err() {
        return EXIT_USAGE;
    }
    let _ = stderr.write_all(&err);
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Exit code for an error that escaped a command.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotACovering { .. } | Error::CapTooSmall { .. } | Error::MultipleMinimalNotches { .. } => {
            EXIT_FAILURE
        }
        _ => EXIT_USAGE,
    }
}

fn dispatch(cmd: Command, stdout: &mut Vec<u8>, stderr: &mut Vec<u8>) -> Result<i32> {
    match cmd {
        Command::Tile(a) => cmd_tile(&a, stdout),
        Command::Cover(a) => cmd_cover(&a, stdout),
        Command::DensityTable(a) => cmd_density(&a, stdout, stderr),
        Command::SearchF(a) => cmd_search(&a, stdout, stderr),
        Command::VerifyBounds(a) => cmd_verify(&a, stdout),
        Command::ThetaBounds(a) => cmd_theta(&a, stdout),
    }
}

pub fn read_lattice(path: &Path) -> Result<IntegerLattice> {
    let file: LatticeFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    IntegerLattice::from_file(&file)
}

fn cmd_tile(a: &TileArgs, stdout: &mut dyn Write) -> Result<i32> {
    let tile = build_tile(&read_lattice(&a.lattice)?)?;
    if a.ascii {
        emit_text(&tile.render_ascii()?, None, stdout)?;
    } else {
        emit_report(&tile.export()?, None, stdout)?;
    }
    Ok(EXIT_OK)
}

/// `cover` output: the discrete verdict, plus the lift when requested.
#[derive(Debug, Serialize)]
struct CoverRecord {
    #[serde(flatten)]
    verdict: CoveringVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    continuous: Option<ContinuousRecord>,
}

#[derive(Debug, Serialize)]
struct ContinuousRecord {
    #[serde(flatten)]
    lift: ContinuousLift,
    resolution: u32,
    /// First grid point found outside the lifted covering, if any.
    uncovered_point: Option<Vec<Rational>>,
}

fn cmd_cover(a: &CoverArgs, stdout: &mut dyn Write) -> Result<i32> {
    let lattice = read_lattice(&a.lattice)?;
    let verdict = covering::covers_discrete(a.n, a.d, &lattice)?;
    let mut ok = verdict.covered;
    let continuous = if a.continuous && verdict.covered {
        let lift = covering::lift_to_continuous(a.n, a.d, &lattice)?;
        let big_d = Rational::from_integer(lift.big_d);
        let uncovered_point = covering::continuous_cover_falsify(a.n, &big_d, &lattice, a.resolution)?;
        ok &= uncovered_point.is_none();
        Some(ContinuousRecord {
            lift,
            resolution: a.resolution,
            uncovered_point,
        })
    } else {
        None
    };
    emit_report(&CoverRecord { verdict, continuous }, None, stdout)?;
    Ok(if ok { EXIT_OK } else { EXIT_FAILURE })
}

fn basis_text(lattice: &IntegerLattice) -> Result<String> {
    let rows = lattice
        .basis_i64()
        .ok_or_else(|| Error::TooLarge("basis entries exceed 64 bits".into()))?;
    Ok(serde_json::to_string(&rows)?)
}

fn cmd_density(a: &DensityArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let baselines = a
        .baseline
        .iter()
        .map(|p| {
            let json: SearchReportJson = serde_json::from_str(&fs::read_to_string(p)?)?;
            SearchReport::from_json(&json)
        })
        .collect::<Result<Vec<_>>>()?;
    let ds: Vec<u64> = (a.d_range.0..=a.d_range.1).collect();
    let rows = search::density_trend(a.n, &ds, a.index_cap)?;

    let mut regressions = 0;
    for row in &rows {
        for base in baselines.iter().filter(|b| b.n == a.n && b.d == row.d) {
            if base.f_value != row.f_value {
                regressions += 1;
                let _ = writeln!(
                    stderr,
                    "regression: n={} d={}: f={} but baseline has {}",
                    a.n, row.d, row.f_value, base.f_value
                );
            }
        }
    }
    let table = rows
        .iter()
        .map(|r| {
            Ok(vec![
                r.d.to_string(),
                r.density.numer().to_string(),
                r.density.denom().to_string(),
                basis_text(&r.witness)?,
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let text = to_csv(&["d", "best_density_num", "best_density_den", "witness_lattice"], &table)?;
    emit_text(&text, a.out.as_deref(), stdout)?;
    Ok(if regressions == 0 { EXIT_OK } else { EXIT_FAILURE })
}

fn cmd_search(a: &SearchArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let opts = SearchOptions {
        index_cap: a.index_cap,
        threads: None,
    };
    let (report, code) = match search::brute_force_f_with(a.n, a.d, &opts) {
        Ok(r) => (r, EXIT_OK),
        Err(Error::CapTooSmall { cap, report }) => {
            let _ = writeln!(
                stderr,
                "warning: a sublattice of index {cap} already works; f({}, {}) may exceed the cap",
                a.n, a.d
            );
            (*report, EXIT_FAILURE)
        }
        Err(e) => return Err(e),
    };
    emit_report(&report.to_json(), a.out.as_deref(), stdout)?;
    Ok(code)
}

fn cmd_verify(a: &VerifyArgs, stdout: &mut dyn Write) -> Result<i32> {
    let method = match a.method {
        MethodArg::Mc => Method::MonteCarlo,
        MethodArg::Quad => Method::NestedQuadrature,
    };
    let samples = a.samples.unwrap_or(match method {
        Method::MonteCarlo => bounds::DEFAULT_MC_SAMPLES,
        Method::NestedQuadrature => bounds::DEFAULT_QUAD_NODES,
    });
    let checks = bounds::run_checks(&VerifyConfig {
        d_star: a.d_star.clone(),
        v: a.v.clone(),
        samples,
        seed: a.seed,
        method,
    })?;
    let text = if a.json || a.out.is_some() {
        to_stable_json(&checks)?
    } else {
        checks_table(&checks)
    };
    emit_text(&text, a.out.as_deref(), stdout)?;
    Ok(if checks.iter().all(|c| c.pass) { EXIT_OK } else { EXIT_FAILURE })
}

fn checks_table(checks: &[BoundCheck]) -> String {
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut s = String::new();
    for c in checks {
        s.push_str(&format!(
            "{} {:<width$}  estimate {:>19}  closed {:>19}  rel_err {:>19}\n",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            crate::report::format_float(c.estimate),
            crate::report::format_float(c.closed_form),
            crate::report::format_float(c.rel_err),
        ));
    }
    s
}

#[derive(Debug, Serialize)]
struct ThetaRow {
    n: usize,
    d: u64,
    theta_lower: Rational,
    theta_lower_approx: f64,
    fn_upper: Rational,
    fn_upper_approx: f64,
}

fn cmd_theta(a: &ThetaArgs, stdout: &mut dyn Write) -> Result<i32> {
    if a.n_max < 2 {
        return Err(Error::InvalidArgument("--n-max must be at least 2".into()));
    }
    let mut rows = Vec::new();
    for n in 2..=a.n_max {
        let theta = search::theta_lower_bound(n)?;
        for d in a.d_range.0..=a.d_range.1 {
            let upper = search::fn_upper_bound(n, d)?;
            rows.push(ThetaRow {
                n,
                d,
                theta_lower_approx: theta.to_f64(),
                theta_lower: theta.clone(),
                fn_upper_approx: upper.to_f64(),
                fn_upper: upper,
            });
        }
    }
    let text = if a.json {
        to_stable_json(&rows)?
    } else {
        let table: Vec<Vec<String>> = rows
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    r.d.to_string(),
                    r.theta_lower.to_string(),
                    crate::report::format_float(r.theta_lower_approx),
                    r.fn_upper.to_string(),
                    crate::report::format_float(r.fn_upper_approx),
                ]
            })
            .collect();
        to_csv(&["n", "d", "theta_lower", "theta_lower_approx", "fn_upper", "fn_upper_approx"], &table)?
    };
    emit_text(&text, None, stdout)?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("simplex-cover").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn range_parser() {
        assert_eq!(parse_range("0..6"), Ok((0, 6)));
        assert_eq!(parse_range(" 3 .. 3 "), Ok((3, 3)));
        assert!(parse_range("4..2").is_err());
        assert!(parse_range("4").is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_capture(&[]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["search-f", "--n", "two", "--d", "1"]).0, EXIT_USAGE);
        let (code, _, err) = run_capture(&["verify-bounds", "--method", "simpson"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("simpson"));
        assert_eq!(run_capture(&["tile", "--lattice", "/nonexistent.json"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["search-f", "--n", "2", "--d", "1", "--threads", "0"]).0, EXIT_USAGE);
    }

    #[test]
    fn help_exits_0() {
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("search-f"));
    }

    #[test]
    fn search_f_2_2() {
        let (code, out, _) = run_capture(&["search-f", "--n", "2", "--d", "2"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("\"f\": 5,"), "{out}");
    }

    #[test]
    fn small_cap_is_a_failure() {
        let (code, out, err) = run_capture(&["search-f", "--n", "2", "--d", "2", "--index-cap", "3"]);
        assert_eq!(code, EXIT_FAILURE);
        assert!(out.contains("\"exhaustive\": false"));
        assert!(err.contains("warning"));
    }

    #[test]
    fn theta_table() {
        let (code, out, _) = run_capture(&["theta-bounds", "--n-max", "4", "--d-range", "0..0"]);
        assert_eq!(code, EXIT_OK);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("2,0,3/2,"));
        assert!(lines[2].starts_with("3,0,25/18,"));
        assert!(lines[3].starts_with("4,0,343/264,"));
    }

    #[test]
    fn verify_quadrature_text() {
        let (code, out, _) = run_capture(&["verify-bounds", "--method", "quad", "--samples", "16"]);
        assert_eq!(code, EXIT_OK, "{out}");
        assert!(out.lines().all(|l| l.starts_with("PASS ")));
    }
}
