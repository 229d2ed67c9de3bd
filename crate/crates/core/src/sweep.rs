//! Parameter sweeps over `a` at fixed `r`, with audits of the monotonicity
//! of kneading words and entropy, location of symbol changes, and
//! continuity probes in `r` and in `a`.

use std::cmp::Ordering;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kneading::{
    compare_symbols, entropy_from_laps, entropy_from_word, itinerary, word_from_values,
    EntropyEstimate, KneadingWord, Symbol,
};
use crate::map::{full_parameter, PowerLawMap};
use crate::thurston::bisect_superstable;

/// Orbit points closer than this to `0` flag a grid point as near-critical.
pub const NEAR_CRITICAL_FLAG: f64 = 1e-12;

/// Lower end of the default sweep window; below it every word is `RRR...`.
pub const DEFAULT_WINDOW_START: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub word_depth: usize,
    pub series_depth: usize,
    pub with_laps: bool,
    pub lap_depth: usize,
    pub root_tol: f64,
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
    /// Fixed slack for entropy backsteps; `None` uses `2 (err_i + err_j)`.
    pub entropy_slack: Option<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            word_depth: 30,
            series_depth: 64,
            with_laps: false,
            lap_depth: 18,
            root_tol: 1e-12,
            workers: None,
            entropy_slack: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub escaped: bool,
    pub near_critical: bool,
    pub no_root: bool,
}

impl Flags {
    pub fn names(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.escaped {
            out.push("escaped");
        }
        if self.near_critical {
            out.push("near_critical");
        }
        if self.no_root {
            out.push("no_root");
        }
        out
    }

    pub fn parse(s: &str) -> Result<Self> {
        let mut flags = Self::default();
        for name in s.split('|').filter(|p| !p.is_empty()) {
            match name {
                "escaped" => flags.escaped = true,
                "near_critical" => flags.near_critical = true,
                "no_root" => flags.no_root = true,
                other => return Err(Error::InvalidParameter(format!("unknown flag {other:?}"))),
            }
        }
        Ok(flags)
    }
}

impl fmt::Display for Flags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.names().join("|"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub a: f64,
    pub r: f64,
    /// `None` only when the orbit escaped.
    pub word: Option<KneadingWord>,
    pub entropy_kneading: Option<EntropyEstimate>,
    pub entropy_laps: Option<EntropyEstimate>,
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    WordOrder,
    EntropyOrder,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::WordOrder => "word_order",
            ViolationKind::EntropyOrder => "entropy_order",
        })
    }
}

/// `records[i]` and `records[j]` (`i < j`) are out of order. The magnitude
/// is the 1-based position of the first differing symbol for word-order
/// violations and the entropy drop for entropy-order violations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub i: usize,
    pub j: usize,
    pub kind: ViolationKind,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepReport {
    pub records: Vec<SweepRecord>,
    pub violations: Vec<Violation>,
    pub max_entropy_backstep: f64,
}

impl SweepReport {
    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }
}

/// `count` points from `lo` to `hi`, both included.
pub fn parameter_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::InvalidParameter("grid needs at least one point".into()));
    }
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(Error::InvalidParameter(format!("bad grid range {lo}:{hi}")));
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    let last = (count - 1) as f64;
    Ok((0..count)
        .map(|k| if k == count - 1 { hi } else { lo + (hi - lo) * (k as f64 / last) })
        .collect())
}

/// `count` points on `(DEFAULT_WINDOW_START, a_full(r)]`, left end excluded.
pub fn window_grid(r: f64, count: usize) -> Vec<f64> {
    let hi = full_parameter(r);
    let lo = DEFAULT_WINDOW_START;
    (1..=count)
        .map(|k| if k == count { hi } else { lo + (hi - lo) * (k as f64 / count as f64) })
        .collect()
}

fn evaluate_point(a: f64, r: f64, cfg: &SweepConfig) -> SweepRecord {
    let mut record = SweepRecord { a, r, word: None, entropy_kneading: None, entropy_laps: None, flags: Flags::default() };
    let map = match PowerLawMap::in_window(a, r) {
        Ok(m) => m,
        Err(_) => {
            record.flags.escaped = true;
            return record;
        }
    };
    let depth = cfg.word_depth.max(cfg.series_depth);
    let orbit = match map.critical_orbit(depth, false) {
        Ok(o) => o,
        Err(_) => {
            record.flags.escaped = true;
            return record;
        }
    };
    let (_, closest) = orbit.closest_approach(cfg.word_depth);
    record.flags.near_critical = closest < NEAR_CRITICAL_FLAG;
    record.word = Some(word_from_values(&orbit.values[..cfg.word_depth], 0.0));

    let series_word = word_from_values(&orbit.values[..cfg.series_depth], 0.0);
    if let Ok(h) = entropy_from_word(&series_word, cfg.series_depth, cfg.root_tol) {
        record.flags.no_root = h.no_root;
        record.entropy_kneading = Some(h);
    }
    if cfg.with_laps {
        record.entropy_laps = entropy_from_laps(&map, cfg.lap_depth).ok();
    }
    record
}

fn validate(r: f64, grid: &[f64], cfg: &SweepConfig) -> Result<()> {
    if !r.is_finite() || r <= 1.0 {
        return Err(Error::InvalidParameter(format!("exponent r = {r} must exceed 1")));
    }
    if cfg.word_depth < 10 {
        return Err(Error::InvalidParameter(format!("word depth {} is below 10", cfg.word_depth)));
    }
    if cfg.series_depth < 32 {
        return Err(Error::InvalidParameter(format!("series depth {} is below 32", cfg.series_depth)));
    }
    if cfg.with_laps && cfg.lap_depth < 8 {
        return Err(Error::InvalidParameter(format!("lap depth {} is below 8", cfg.lap_depth)));
    }
    if grid.windows(2).any(|p| p[0] > p[1]) {
        return Err(Error::InvalidParameter("grid must be sorted ascending".into()));
    }
    for &a in grid {
        PowerLawMap::in_window(a, r)?;
    }
    Ok(())
}

fn run_in_pool<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> T {
    match workers.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(job),
        None => job(),
    }
}

/// One record per grid point, followed by [`monotonicity_audit`]. Per-point
/// failures become flags; only invalid input is an error.
pub fn entropy_curve(r: f64, grid: &[f64], cfg: &SweepConfig) -> Result<SweepReport> {
    validate(r, grid, cfg)?;
    let records = run_in_pool(cfg.workers, || {
        grid.par_iter().map(|&a| evaluate_point(a, r, cfg)).collect::<Vec<_>>()
    });
    let report = SweepReport { records, violations: Vec::new(), max_entropy_backstep: 0.0 };
    Ok(run_in_pool(cfg.workers, || monotonicity_audit(report, cfg.entropy_slack)))
}

fn first_difference(u: &[Symbol], v: &[Symbol]) -> usize {
    u.iter().zip(v).position(|(x, y)| x != y).map_or(0, |p| p + 1)
}

/// Fills `violations` by comparing every pair `i < j`: a word-order
/// violation when `word_i > word_j`, an entropy-order violation when
/// `h_i - h_j` exceeds the slack (fixed, or `2 (err_i + err_j)` when
/// `entropy_slack` is `None`).
pub fn monotonicity_audit(mut report: SweepReport, entropy_slack: Option<f64>) -> SweepReport {
    let records = &report.records;
    let violations: Vec<Violation> = (0..records.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let ri = &records[i];
            records.iter().enumerate().skip(i + 1).flat_map(move |(j, rj)| {
                let mut found = Vec::new();
                if let (Some(wi), Some(wj)) = (&ri.word, &rj.word) {
                    if compare_symbols(wi.symbols(), wj.symbols()) == Ordering::Greater {
                        found.push(Violation {
                            i,
                            j,
                            kind: ViolationKind::WordOrder,
                            magnitude: first_difference(wi.symbols(), wj.symbols()) as f64,
                        });
                    }
                }
                if let (Some(hi), Some(hj)) = (&ri.entropy_kneading, &rj.entropy_kneading) {
                    let drop = hi.value - hj.value;
                    let slack = entropy_slack.unwrap_or(2.0 * (hi.error_bound + hj.error_bound));
                    if drop > slack {
                        found.push(Violation { i, j, kind: ViolationKind::EntropyOrder, magnitude: drop });
                    }
                }
                found
            })
        })
        .collect();

    let mut running_max = f64::NEG_INFINITY;
    let mut backstep = 0.0f64;
    for h in records.iter().filter_map(|r| r.entropy_kneading.map(|e| e.value)) {
        backstep = backstep.max(running_max - h);
        running_max = running_max.max(h);
    }
    report.violations = violations;
    report.max_entropy_backstep = backstep;
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolChange {
    pub a: f64,
    /// `e_n` just below `a`.
    pub before: Symbol,
    /// `e_n` just above `a`.
    pub after: Symbol,
    /// Parity of the number of `R`s in `e_1 ... e_{n-1}`.
    pub parity: Parity,
}

impl SymbolChange {
    /// Even prefixes must change `L -> R`, odd ones `R -> L`.
    pub fn matches_signed_order(&self) -> bool {
        match self.parity {
            Parity::Even => (self.before, self.after) == (Symbol::L, Symbol::R),
            Parity::Odd => (self.before, self.after) == (Symbol::R, Symbol::L),
        }
    }
}

/// Locates the parameter in `bracket` where `e_n` changes, given endpoints
/// whose itineraries agree on `e_1 ... e_{n-1}` and differ at `e_n`.
pub fn locate_symbol_change(r: f64, n: usize, bracket: (f64, f64), tol: f64) -> Result<SymbolChange> {
    if n < 2 {
        return Err(Error::InvalidParameter("symbol change needs n >= 2".into()));
    }
    let (lo, hi) = if bracket.0 <= bracket.1 { bracket } else { (bracket.1, bracket.0) };
    let w_lo = itinerary(&PowerLawMap::new(lo, r)?, n, 0.0)?;
    let w_hi = itinerary(&PowerLawMap::new(hi, r)?, n, 0.0)?;
    if w_lo.len() < n || w_hi.len() < n || w_lo.symbols()[..n - 1] != w_hi.symbols()[..n - 1] {
        return Err(Error::PrefixMismatch {
            lo,
            hi,
            detail: format!("itineraries {w_lo} and {w_hi} differ before position {n}"),
        });
    }
    let (before, after) = (w_lo.symbols()[n - 1], w_hi.symbols()[n - 1]);
    if before == after {
        return Err(Error::NoBracket { n, lo, hi });
    }
    let mut target = w_lo.symbols()[..n - 1].to_vec();
    target.push(Symbol::C);
    let a = bisect_superstable(r, &KneadingWord::new(target)?, (lo, hi), tol)?;
    let parity = if w_lo.reversing_count(n - 1) % 2 == 0 { Parity::Even } else { Parity::Odd };
    Ok(SymbolChange { a, before, after, parity })
}

/// Below this distance from `0` the itinerary is not locally constant and
/// the continuity probes refuse the point.
pub const PROBE_MARGIN: f64 = 1e-6;

/// Whether the depth-`n` itinerary is the same at `r0 - delta`, `r0` and
/// `r0 + delta`.
pub fn r_continuity_probe(a: f64, r0: f64, n: usize, delta: f64) -> Result<bool> {
    let orbit = PowerLawMap::new(a, r0)?.critical_orbit(n, false)?;
    let (step, min_abs) = orbit.closest_approach(n);
    if min_abs <= PROBE_MARGIN {
        return Err(Error::NearCriticalOrbit { step, min_abs });
    }
    let center = word_from_values(&orbit.values, 0.0);
    for r in [r0 - delta, r0 + delta] {
        if itinerary(&PowerLawMap::new(a, r)?, n, 0.0)? != center {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Largest entropy jump between neighbours on the grid of `steps + 1`
/// points spanning `[a0 - radius, a0 + radius]`.
pub fn entropy_continuity_probe(r: f64, a0: f64, radius: f64, steps: usize, series_depth: usize) -> Result<f64> {
    if radius == 0.0 || steps == 0 {
        PowerLawMap::in_window(a0, r)?;
        return Ok(0.0);
    }
    if radius.is_nan() || radius <= 0.0 {
        return Err(Error::InvalidParameter(format!("radius {radius} must be non-negative")));
    }
    let grid = parameter_grid(a0 - radius, a0 + radius, steps + 1)?;
    let entropies = grid
        .par_iter()
        .map(|&a| {
            let map = PowerLawMap::in_window(a, r)?;
            let word = itinerary(&map, series_depth, 0.0)?;
            Ok(entropy_from_word(&word, series_depth, 1e-12)?.value)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(entropies.windows(2).map(|p| (p[1] - p[0]).abs()).fold(0.0, f64::max))
}
