//! Command-line front end. [`run`] takes the argument list and two writers
//! and returns the process exit code, so the binary is a one-liner and the
//! whole surface is testable in-process.
//!
//! Exit codes: `0` success, `2` invalid configuration or parameters, `3`
//! escaping orbit, `4` inadmissible word, `5` word-order violations in a
//! sweep, `6` failed verification check.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Error;
use crate::kneading::{entropy_from_kneading, entropy_from_laps, itinerary, EntropyEstimate, KneadingWord};
use crate::map::{full_parameter, PowerLawMap};
use crate::sweep::{entropy_curve, parameter_grid, SweepConfig, SweepReport, ViolationKind};
use crate::thurston::{
    determinant_identity_residual, find_superstable, positivity_check, superstable_census,
    telescoping_sum, thurston_fixed_point, CriticalOrbitVector, SignPattern, ThurstonMap,
    DEFAULT_MAX_ITER,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_ESCAPED: i32 = 3;
pub const EXIT_INADMISSIBLE: i32 = 4;
pub const EXIT_WORD_ORDER: i32 = 5;
pub const EXIT_VERIFY: i32 = 6;

/// Overrides `--workers` when set.
pub const WORKERS_ENV: &str = "KNEADLAB_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "kneadlab", version, about = "Kneading theory for the family a - |x|^r")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Entropy of a single map from the kneading root and the lap count.
    Entropy(EntropyArgs),
    /// Superstable parameter of a word by bisection and by Thurston iteration.
    Superstable(SuperstableArgs),
    /// Kneading words and entropy over a parameter range.
    Sweep(SweepArgs),
    /// Numerical checks of the fixed-point, determinant and positivity results.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, count] = parts[..] else {
            return Err(format!("expected lo:hi:count, got {s:?}"));
        };
        let lo: f64 = lo.trim().parse().map_err(|e| format!("lo: {e}"))?;
        let hi: f64 = hi.trim().parse().map_err(|e| format!("hi: {e}"))?;
        let count: usize = count.trim().parse().map_err(|e| format!("count: {e}"))?;
        Ok(Range { lo, hi, count })
    }
}

#[derive(Debug, Args)]
struct Depths {
    #[arg(long, default_value_t = 30)]
    word_depth: usize,
    #[arg(long, default_value_t = 64)]
    series_depth: usize,
    #[arg(long, default_value_t = 18)]
    lap_depth: usize,
}

#[derive(Debug, Args)]
struct EntropyArgs {
    #[arg(long)]
    r: f64,
    #[arg(long)]
    a: f64,
    #[command(flatten)]
    depths: Depths,
    /// Skip the lap-count estimate.
    #[arg(long)]
    no_laps: bool,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Report entropies in bits instead of nats.
    #[arg(long)]
    log2: bool,
}

#[derive(Debug, Args)]
struct SuperstableArgs {
    #[arg(long)]
    r: f64,
    #[arg(long)]
    word: String,
    #[arg(long, default_value_t = 1e-14)]
    tol: f64,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    r: f64,
    /// Inclusive grid `lo:hi:count`.
    #[arg(long)]
    a_range: Range,
    #[command(flatten)]
    depths: Depths,
    /// Add the lap-count estimate to every row.
    #[arg(long)]
    laps: bool,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Fixed slack for entropy backsteps instead of the per-pair error bounds.
    #[arg(long)]
    entropy_slack: Option<f64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long)]
    log2: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Exponents to check; repeatable.
    #[arg(long = "r", default_values_t = [2.0])]
    rs: Vec<f64>,
    #[arg(long, default_value_t = 10)]
    max_period: usize,
    /// Overrides every residual tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Generic (non-superstable) identity samples per exponent.
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

fn config_or_escape(e: Error) -> Failure {
    let code = match e {
        Error::OrbitEscaped { .. } => EXIT_ESCAPED,
        _ => EXIT_CONFIG,
    };
    Failure::new(code, e.to_string())
}

type CmdResult = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Entropy(args) => cmd_entropy(&args, out),
        Command::Superstable(args) => cmd_superstable(&args, out),
        Command::Sweep(args) => cmd_sweep(&args, out, err),
        Command::Verify(args) => cmd_verify(&args, out, err),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn io_failure(e: io::Error) -> Failure {
    Failure::new(EXIT_CONFIG, format!("i/o: {e}"))
}

fn scale(log2: bool) -> f64 {
    if log2 {
        std::f64::consts::LN_2.recip()
    } else {
        1.0
    }
}

fn cmd_entropy(args: &EntropyArgs, out: &mut dyn Write) -> CmdResult {
    let map = PowerLawMap::in_window(args.a, args.r).map_err(config_or_escape)?;
    let word = itinerary(&map, args.depths.word_depth, 0.0).map_err(config_or_escape)?;
    let hk = entropy_from_kneading(&map, args.depths.series_depth, args.tol).map_err(config_or_escape)?;
    let hl = if args.no_laps { None } else { Some(entropy_from_laps(&map, args.depths.lap_depth).map_err(config_or_escape)?) };
    let s = scale(args.log2);
    let unit = if args.log2 { "bits" } else { "nats" };
    let mut line = format!(
        "a={} r={} h_kneading={:.6} (+/- {:.1e}) ",
        args.a,
        args.r,
        hk.value * s,
        hk.error_bound * s
    );
    if let Some(hl) = hl {
        line += &format!("h_laps={:.6} (+/- {:.1e}) ", hl.value * s, hl.error_bound * s);
    }
    line += &format!("{unit} word={word}");
    if hk.no_root {
        line += " no_root";
    }
    writeln!(out, "{line}").map_err(io_failure)?;
    Ok(EXIT_OK)
}

fn cmd_superstable(args: &SuperstableArgs, out: &mut dyn Write) -> CmdResult {
    let word: KneadingWord = args.word.parse().map_err(|e: Error| Failure::new(EXIT_CONFIG, e.to_string()))?;
    if !word.terminated_at_c() || word.len() < 2 {
        return Err(Failure::new(EXIT_CONFIG, format!("word {word} must end in C after at least one symbol")));
    }
    PowerLawMap::new(1.0, args.r).map_err(config_or_escape)?;
    let inadmissible = |what: &str, e: Error| Failure::new(EXIT_INADMISSIBLE, format!("word {word} is not realized: {what}: {e}"));

    let a_bis = find_superstable(args.r, &word, args.tol).map_err(|e| inadmissible("bisection", e))?;
    let signs = SignPattern::from_word(&word).map_err(|e| inadmissible("sign pattern", e))?;
    let fp = thurston_fixed_point(&signs, args.r, &CriticalOrbitVector::default_guess(&signs), 1e-13, DEFAULT_MAX_ITER)
        .map_err(|e| inadmissible("Thurston iteration", e))?;
    let a_fp = fp.parameter();
    let pos = positivity_check(args.r, a_bis, word.len()).map_err(|e| inadmissible("positivity", e))?;
    writeln!(
        out,
        "word={word} r={} a_bisection={a_bis:.12} a_thurston={a_fp:.12} diff={:.1e} iterations={}{} det={:.6} rho={:.6} {}",
        args.r,
        (a_bis - a_fp).abs(),
        fp.iterations,
        if fp.newton_fallback { " (newton)" } else { "" },
        pos.det,
        pos.spectral_radius,
        if pos.ok { "OK" } else { "FAIL" }
    )
    .map_err(io_failure)?;
    Ok(EXIT_OK)
}

fn workers(cli: Option<usize>) -> Result<Option<usize>, Failure> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Failure::new(EXIT_CONFIG, format!("{WORKERS_ENV}={v:?} is not a worker count"))),
        Err(_) => Ok(cli),
    }
}

fn open_output<'a>(path: &Option<PathBuf>, out: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(io_failure)?)),
        None => Box::new(out),
    })
}

fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let Range { lo, hi, count } = args.a_range;
    let grid = parameter_grid(lo, hi, count).map_err(config_or_escape)?;
    let cfg = SweepConfig {
        word_depth: args.depths.word_depth,
        series_depth: args.depths.series_depth,
        with_laps: args.laps,
        lap_depth: args.depths.lap_depth,
        root_tol: args.tol,
        workers: workers(args.workers)?,
        entropy_slack: args.entropy_slack,
    };
    let report = entropy_curve(args.r, &grid, &cfg).map_err(config_or_escape)?;
    let mut sink = open_output(&args.output, out)?;
    match args.format {
        Format::Csv => write_sweep_csv(&report, scale(args.log2), &mut sink),
        Format::Json => write_sweep_json(&report, scale(args.log2), &mut sink),
    }
    .map_err(io_failure)?;
    sink.flush().map_err(io_failure)?;
    drop(sink);

    let word_order = report.count(ViolationKind::WordOrder);
    if word_order > 0 {
        let _ = writeln!(err, "{word_order} word-order violations");
        return Ok(EXIT_WORD_ORDER);
    }
    Ok(EXIT_OK)
}

/// Column order of the sweep CSV.
pub const SWEEP_COLUMNS: [&str; 8] = ["a", "r", "word", "h_kneading", "h_kneading_err", "h_laps", "h_laps_err", "flags"];

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_pair(e: Option<EntropyEstimate>, s: f64) -> (String, String) {
    e.map_or((String::new(), String::new()), |e| (num(e.value * s), num(e.error_bound * s)))
}

/// Rows with every number at 17 significant digits, then `#` summary lines.
pub fn write_sweep_csv(report: &SweepReport, scale: f64, out: &mut dyn Write) -> io::Result<()> {
    {
        let mut w = csv::Writer::from_writer(&mut *out);
        w.write_record(SWEEP_COLUMNS)?;
        for rec in &report.records {
            let (hk, hk_err) = opt_pair(rec.entropy_kneading, scale);
            let (hl, hl_err) = opt_pair(rec.entropy_laps, scale);
            let word = rec.word.as_ref().map(ToString::to_string).unwrap_or_default();
            w.write_record([num(rec.a), num(rec.r), word, hk, hk_err, hl, hl_err, rec.flags.to_string()])?;
        }
        w.flush()?;
    }
    writeln!(out, "# records={}", report.records.len())?;
    writeln!(out, "# word_order_violations={}", report.count(ViolationKind::WordOrder))?;
    writeln!(out, "# entropy_order_violations={}", report.count(ViolationKind::EntropyOrder))?;
    writeln!(out, "# max_entropy_backstep={}", num(report.max_entropy_backstep * scale))?;
    for v in &report.violations {
        writeln!(out, "# violation {} {} {} {}", v.kind, v.i, v.j, num(v.magnitude))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct JsonRecord {
    a: f64,
    r: f64,
    word: Option<String>,
    h_kneading: Option<f64>,
    h_kneading_err: Option<f64>,
    h_laps: Option<f64>,
    h_laps_err: Option<f64>,
    flags: Vec<&'static str>,
}

#[derive(Serialize)]
struct JsonSummary<'a> {
    records: usize,
    word_order_violations: usize,
    entropy_order_violations: usize,
    max_entropy_backstep: f64,
    violations: &'a [crate::sweep::Violation],
}

#[derive(Serialize)]
struct JsonSweep<'a> {
    records: Vec<JsonRecord>,
    summary: JsonSummary<'a>,
}

pub fn write_sweep_json(report: &SweepReport, scale: f64, out: &mut dyn Write) -> io::Result<()> {
    let records = report
        .records
        .iter()
        .map(|rec| JsonRecord {
            a: rec.a,
            r: rec.r,
            word: rec.word.as_ref().map(ToString::to_string),
            h_kneading: rec.entropy_kneading.map(|e| e.value * scale),
            h_kneading_err: rec.entropy_kneading.map(|e| e.error_bound * scale),
            h_laps: rec.entropy_laps.map(|e| e.value * scale),
            h_laps_err: rec.entropy_laps.map(|e| e.error_bound * scale),
            flags: rec.flags.names(),
        })
        .collect();
    let doc = JsonSweep {
        records,
        summary: JsonSummary {
            records: report.records.len(),
            word_order_violations: report.count(ViolationKind::WordOrder),
            entropy_order_violations: report.count(ViolationKind::EntropyOrder),
            max_entropy_backstep: report.max_entropy_backstep * scale,
            violations: &report.violations,
        },
    };
    serde_json::to_writer_pretty(&mut *out, &doc).map_err(io::Error::other)?;
    writeln!(out)
}

/// One row of the verification table.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRow {
    pub check: &'static str,
    pub r: f64,
    pub cases: usize,
    pub max_residual: f64,
    pub tol: f64,
    pub passed: bool,
}

/// Default tolerances of the verification checks.
pub const FIXED_POINT_TOL: f64 = 1e-8;
pub const SOLVER_AGREEMENT_TOL: f64 = 1e-8;
pub const IDENTITY_TOL: f64 = 1e-8;
pub const TELESCOPING_TOL: f64 = 1e-8;
pub const JACOBIAN_TOL: f64 = 1e-6;
/// Finite-difference step before per-row scaling.
pub const FD_STEP: f64 = 1e-6;
/// Required margin below one for the spectral radius.
pub const CONTRACTION_MARGIN: f64 = 1e-3;

struct Acc {
    check: &'static str,
    cases: usize,
    worst: f64,
    failed: bool,
}

impl Acc {
    fn new(check: &'static str) -> Self {
        Self { check, cases: 0, worst: 0.0, failed: false }
    }

    fn push(&mut self, residual: f64, tol: f64) {
        self.cases += 1;
        if residual.is_nan() || residual > tol {
            self.failed = true;
        }
        if residual.is_nan() || residual > self.worst {
            self.worst = residual;
        }
    }

    fn fail(&mut self) {
        self.cases += 1;
        self.failed = true;
        self.worst = f64::INFINITY;
    }

    fn row(self, r: f64, tol: f64) -> CheckRow {
        CheckRow { check: self.check, r, cases: self.cases, max_residual: self.worst, tol, passed: !self.failed }
    }
}

/// Largest entrywise relative difference; entries with both sides zero
/// count as exact.
pub fn max_relative_difference(a: &nalgebra::DMatrix<f64>, b: &nalgebra::DMatrix<f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| {
            let d = (x - y).abs();
            if d == 0.0 {
                0.0
            } else {
                d / x.abs().max(y.abs())
            }
        })
        .fold(0.0, f64::max)
}

/// Generic identity sample: `(a, n)` in the window with the critical orbit
/// at least `1e-3` from `0` over its first `n - 1` steps.
fn generic_samples(r: f64, count: usize, rng: &mut ChaCha8Rng) -> Vec<(f64, usize)> {
    let a_full = full_parameter(r);
    let mut found = Vec::with_capacity(count);
    while found.len() < count {
        let a = rng.gen_range(0.5..a_full);
        let n = rng.gen_range(2..=10usize);
        let Ok(orbit) = PowerLawMap::new(a, r).and_then(|m| m.critical_orbit(n, false)) else {
            continue;
        };
        if orbit.values.iter().all(|w| w.abs() > 1e-3) {
            found.push((a, n));
        }
    }
    found
}

/// Runs every check for one exponent and returns the table rows in a fixed
/// order.
pub fn verify_exponent(r: f64, max_period: usize, tol: Option<f64>, samples: usize, seed: u64) -> Vec<CheckRow> {
    let tol_of = |default: f64| tol.unwrap_or(default);
    let census = superstable_census(r, max_period, 1e-15);

    let mut fixed = Acc::new("fixed_point");
    let mut agree = Acc::new("solver_agreement");
    let mut identity = Acc::new("identity");
    let mut tele = Acc::new("telescoping");
    let mut jac = Acc::new("jacobian_fd");
    let mut positivity = Acc::new("positivity");
    let mut worst_rho = 0.0f64;
    let mut positivity_failed = false;

    for s in &census {
        let n = s.period();
        let omega = match PowerLawMap::new(s.a, r).and_then(|m| m.critical_orbit(n - 1, false)) {
            Ok(o) => o.values,
            Err(_) => {
                fixed.fail();
                continue;
            }
        };
        let map = SignPattern::from_word(&s.word).and_then(|signs| ThurstonMap::new(signs, r));
        let Ok(map) = map else {
            fixed.fail();
            continue;
        };
        match map.apply(&omega) {
            Ok(t) => fixed.push(t.iter().zip(&omega).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max), tol_of(FIXED_POINT_TOL)),
            Err(_) => fixed.fail(),
        }
        match thurston_fixed_point(map.signs(), r, &CriticalOrbitVector::default_guess(map.signs()), 1e-13, DEFAULT_MAX_ITER) {
            Ok(fp) => agree.push((fp.parameter() - s.a).abs(), tol_of(SOLVER_AGREEMENT_TOL)),
            Err(_) => agree.fail(),
        }
        match determinant_identity_residual(r, s.a, n) {
            Ok(res) => {
                identity.push(res.relative_residual, tol_of(IDENTITY_TOL));
                match telescoping_sum(r, s.a, n) {
                    Ok(t) => tele.push((t - res.rhs).abs() / res.rhs.abs().max(1.0), tol_of(TELESCOPING_TOL)),
                    Err(_) => tele.fail(),
                }
            }
            Err(_) => {
                identity.fail();
                tele.fail();
            }
        }
        match (map.jacobian(&omega), map.row_scaled_difference_jacobian(&omega, FD_STEP)) {
            (Ok(j), Ok(fd)) => jac.push(max_relative_difference(j.matrix(), &fd), tol_of(JACOBIAN_TOL)),
            _ => jac.fail(),
        }
        match positivity_check(r, s.a, n) {
            Ok(p) => {
                positivity.cases += 1;
                worst_rho = worst_rho.max(p.spectral_radius);
                if !(p.det > 0.0 && p.spectral_radius < 1.0 - CONTRACTION_MARGIN) {
                    positivity_failed = true;
                }
            }
            Err(_) => {
                positivity.cases += 1;
                positivity_failed = true;
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ r.to_bits());
    for (a, n) in generic_samples(r, samples, &mut rng) {
        match determinant_identity_residual(r, a, n) {
            Ok(res) => {
                identity.push(res.relative_residual, tol_of(IDENTITY_TOL));
                match telescoping_sum(r, a, n) {
                    Ok(t) => tele.push((t - res.rhs).abs() / res.rhs.abs().max(1.0), tol_of(TELESCOPING_TOL)),
                    Err(_) => tele.fail(),
                }
            }
            Err(_) => {
                identity.fail();
                tele.fail();
            }
        }
    }

    positivity.worst = worst_rho;
    positivity.failed = positivity_failed || census.is_empty();
    vec![
        CheckRow { check: "census", r, cases: census.len(), max_residual: 0.0, tol: 0.0, passed: !census.is_empty() },
        fixed.row(r, tol_of(FIXED_POINT_TOL)),
        agree.row(r, tol_of(SOLVER_AGREEMENT_TOL)),
        identity.row(r, tol_of(IDENTITY_TOL)),
        tele.row(r, tol_of(TELESCOPING_TOL)),
        jac.row(r, tol_of(JACOBIAN_TOL)),
        positivity.row(r, 1.0 - CONTRACTION_MARGIN),
    ]
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    if args.max_period < 2 {
        return Err(Failure::new(EXIT_CONFIG, "--max-period must be at least 2"));
    }
    if let Some(t) = args.tol {
        if t.is_nan() || t <= 0.0 {
            return Err(Failure::new(EXIT_CONFIG, "--tol must be positive"));
        }
    }
    for &r in &args.rs {
        PowerLawMap::new(1.0, r).map_err(config_or_escape)?;
    }
    let rows: Vec<CheckRow> = args
        .rs
        .iter()
        .flat_map(|&r| verify_exponent(r, args.max_period, args.tol, args.samples, args.seed))
        .collect();

    let mut sink = open_output(&args.output, out)?;
    match args.format {
        Format::Csv => {
            writeln!(sink, "{:<17} {:>6} {:>6} {:>24} {:>24}  status", "check", "r", "cases", "max_residual", "tol")
                .map_err(io_failure)?;
            for row in &rows {
                writeln!(
                    sink,
                    "{:<17} {:>6} {:>6} {:>24} {:>24}  {}",
                    row.check,
                    row.r,
                    row.cases,
                    num(row.max_residual),
                    num(row.tol),
                    if row.passed { "PASS" } else { "FAIL" }
                )
                .map_err(io_failure)?;
            }
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut sink, &rows).map_err(|e| io_failure(io::Error::other(e)))?;
            writeln!(sink).map_err(io_failure)?;
        }
    }
    sink.flush().map_err(io_failure)?;
    drop(sink);

    let failed: Vec<String> = rows.iter().filter(|r| !r.passed).map(|r| format!("{} (r={})", r.check, r.r)).collect();
    if failed.is_empty() {
        Ok(EXIT_OK)
    } else {
        let _ = writeln!(err, "failed checks: {}", failed.join(", "));
        Ok(EXIT_VERIFY)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("kneadlab").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn range_syntax() {
        assert_eq!("0.5:2:3".parse::<Range>().unwrap(), Range { lo: 0.5, hi: 2.0, count: 3 });
        assert!("0.5:2".parse::<Range>().is_err());
        assert!("a:2:3".parse::<Range>().is_err());
    }

    #[test]
    fn entropy_command() {
        let (code, out, _) = call(&["entropy", "--r", "2", "--a", "2"]);
        assert_eq!(code, 0);
        assert!(out.contains("h_kneading=0.693"), "{out}");

        let (code, out, _) = call(&["entropy", "--r", "3", "--a", "1"]);
        assert_eq!(code, 0);
        assert!(out.contains("h_kneading=0.000000") && out.contains("word=RC"), "{out}");

        let (code, _, err) = call(&["entropy", "--r", "2", "--a", "2.5"]);
        assert_eq!(code, EXIT_CONFIG);
        assert!(err.contains("(0, 2]"), "{err}");
    }

    #[test]
    fn superstable_command() {
        let (code, out, _) = call(&["superstable", "--r", "2", "--word", "RLC"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("a_bisection=1.754877666") && out.contains("OK"), "{out}");
        let (code, out, _) = call(&["superstable", "--r", "5", "--word", "RC"]);
        assert_eq!(code, 0);
        assert!(out.contains("a_bisection=1.000000000000"), "{out}");
        assert_eq!(call(&["superstable", "--r", "2", "--word", "RRC"]).0, EXIT_INADMISSIBLE);
        assert_eq!(call(&["superstable", "--r", "2", "--word", "RCL"]).0, EXIT_CONFIG);
    }

    #[test]
    fn sweep_command() {
        let (code, out, _) = call(&["sweep", "--r", "2", "--a-range", "0.5:2:2"]);
        assert_eq!(code, 0);
        let rows: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0], SWEEP_COLUMNS.join(","));
        assert_eq!(call(&["sweep", "--r", "2", "--a-range", "0.5:2:0"]).0, EXIT_CONFIG);
        assert_eq!(call(&["sweep", "--r", "2", "--a-range", "0.5:3:4"]).0, EXIT_CONFIG);
        let (code, out, _) = call(&["sweep", "--r", "2", "--a-range", "1:2:3", "--format", "json", "--laps"]);
        assert_eq!(code, 0);
        let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(doc["records"].as_array().unwrap().len(), 3);
        assert_eq!(doc["summary"]["word_order_violations"], 0);
    }

    #[test]
    fn verify_reporting_path() {
        let (code, out, err) = call(&["verify", "--max-period", "5", "--tol", "1e-16"]);
        assert_eq!(code, EXIT_VERIFY, "{out}");
        assert!(err.contains("identity"), "{err}");
        let (code, out, _) = call(&["verify", "--max-period", "6"]);
        assert_eq!(code, 0, "{out}");
    }

    #[test]
    fn bad_flags_are_config_errors() {
        assert_eq!(call(&["entropy", "--r", "2"]).0, EXIT_CONFIG);
        assert_eq!(call(&["nonsense"]).0, EXIT_CONFIG);
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }
}
