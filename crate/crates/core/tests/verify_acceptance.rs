//! Acceptance suite: one `[PASS]`/`[FAIL]` line per criterion, nonzero exit
//! status if any criterion fails. Tolerances and budgets are pinned below.

use std::f64::consts::LN_2;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kneadlab::cli;
use kneadlab::kneading::{entropy_from_kneading, entropy_from_laps};
use kneadlab::sweep::{entropy_continuity_probe, entropy_curve, r_continuity_probe, window_grid, SweepConfig, ViolationKind};
use kneadlab::thurston::{
    determinant_identity_residual, find_superstable, positivity_check, superstable_census,
    telescoping_sum, thurston_fixed_point, CriticalOrbitVector, SignPattern, Superstable,
    ThurstonMap, DEFAULT_MAX_ITER,
};
use kneadlab::{full_parameter, KneadingWord, PowerLawMap};

const PERIOD_TWO_TOL: f64 = 1e-10;
const PERIOD_TWO_BUDGET: Duration = Duration::from_secs(1);
const CENSUS_RS: [f64; 3] = [1.5, 2.0, 2.5];
const CENSUS_MAX_PERIOD: usize = 12;
const FIXED_POINT_TOL: f64 = 1e-8;
const CENSUS_BUDGET: Duration = Duration::from_secs(30);
const IDENTITY_TOL: f64 = 1e-8;
const GENERIC_SAMPLES: usize = 200;
const GENERIC_MARGIN: f64 = 1e-3;
const CONTRACTION_MARGIN: f64 = 1e-3;
const FULL_MAP_TOL: f64 = 1e-3;
const GOLDEN_TOL: f64 = 2e-3;
const ANCHOR_BUDGET: Duration = Duration::from_secs(10);
const AGREEMENT_TOL: f64 = 0.02;
const AGREEMENT_BUDGET: Duration = Duration::from_secs(120);
const SWEEP_RS: [f64; 4] = [1.5, 2.0, 2.5, 3.7];
const SWEEP_POINTS: usize = 2000;
const SWEEP_BUDGET: Duration = Duration::from_secs(300);
const JACOBIAN_STATES: usize = 100;
const JACOBIAN_STEP: f64 = 1e-6;
const JACOBIAN_TOL: f64 = 1e-6;
/// Smallest branch argument of a random Jacobian test state.
const JACOBIAN_CLEARANCE: f64 = 1e-2;
const R_PROBES: usize = 50;
const R_PROBE_DELTA: f64 = 1e-6;
const R_PROBE_DEPTH: usize = 10;
/// Orbit distance from `0` below which a random probe point counts as
/// precritical and is redrawn.
const R_PROBE_MARGIN: f64 = 1e-3;
const ENTROPY_PROBES: usize = 20;
const ENTROPY_PROBE_RADIUS: f64 = 1e-3;
const ENTROPY_PROBE_STEPS: usize = 64;
const ENTROPY_JUMP_TOL: f64 = 0.02;

struct Outcome {
    passed: bool,
    detail: String,
}

fn report(id: usize, name: &str, started: Instant, outcome: Outcome) -> bool {
    println!(
        "[{}] {id:>2} {name}: {} ({:.2} s)",
        if outcome.passed { "PASS" } else { "FAIL" },
        outcome.detail,
        started.elapsed().as_secs_f64()
    );
    outcome.passed
}

fn word(s: &str) -> KneadingWord {
    s.parse().expect("valid word")
}

fn fixed_point_parameter(w: &KneadingWord, r: f64) -> Option<f64> {
    let signs = SignPattern::from_word(w).ok()?;
    thurston_fixed_point(&signs, r, &CriticalOrbitVector::default_guess(&signs), 1e-13, DEFAULT_MAX_ITER)
        .ok()
        .map(|fp| fp.parameter())
}

fn criterion_1() -> Outcome {
    let started = Instant::now();
    let mut worst = 0.0f64;
    for r in [1.2, 1.5, 2.0, 2.5, 3.0, 4.0] {
        let a_bis = find_superstable(r, &word("RC"), 1e-15).unwrap_or(f64::NAN);
        let a_fp = fixed_point_parameter(&word("RC"), r).unwrap_or(f64::NAN);
        worst = worst.max((a_bis - 1.0).abs()).max((a_fp - 1.0).abs());
        if worst.is_nan() {
            break;
        }
    }
    let elapsed = started.elapsed();
    Outcome {
        passed: worst <= PERIOD_TWO_TOL && elapsed < PERIOD_TWO_BUDGET,
        detail: format!("max |a* - 1| = {worst:.1e} (tol {PERIOD_TWO_TOL:.0e}), budget {PERIOD_TWO_BUDGET:?}"),
    }
}

/// Number of superstable words of exact period `n` in a full unimodal
/// family: `(1 / 2n) sum_{d | n, d odd} mu(d) 2^{n/d}`.
fn census_count(n: usize) -> usize {
    fn mobius(mut d: usize) -> i64 {
        let mut result = 1;
        let mut p = 2;
        while p * p <= d {
            if d.is_multiple_of(p) {
                d /= p;
                if d.is_multiple_of(p) {
                    return 0;
                }
                result = -result;
            }
            p += 1;
        }
        if d > 1 {
            result = -result;
        }
        result
    }
    let sum: i64 = (1..=n).filter(|d| n.is_multiple_of(*d) && d % 2 == 1).map(|d| mobius(d) * (1i64 << (n / d))).sum();
    (sum / (2 * n as i64)) as usize
}

fn orbit_vector(s: &Superstable, r: f64) -> Vec<f64> {
    PowerLawMap::new(s.a, r).and_then(|m| m.critical_orbit(s.period() - 1, false)).map(|o| o.values).unwrap_or_default()
}

fn criterion_2(census: &[(f64, Vec<Superstable>)], elapsed: Duration) -> Outcome {
    let expected: usize = (2..=CENSUS_MAX_PERIOD).map(census_count).sum();
    let mut worst = 0.0f64;
    let mut counts = Vec::new();
    let mut all_found = true;
    for (r, found) in census {
        counts.push(format!("r={r}: {}", found.len()));
        all_found &= found.len() == expected;
        for s in found {
            let omega = orbit_vector(s, *r);
            let residual = SignPattern::from_word(&s.word)
                .and_then(|signs| ThurstonMap::new(signs, *r))
                .and_then(|map| map.apply(&omega))
                .map(|t| t.iter().zip(&omega).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
                .unwrap_or(f64::INFINITY);
            worst = worst.max(residual);
        }
    }
    Outcome {
        passed: all_found && worst <= FIXED_POINT_TOL && elapsed < CENSUS_BUDGET,
        detail: format!(
            "words {} (expected {expected} each), max |T(w) - w| = {worst:.1e} (tol {FIXED_POINT_TOL:.0e}), budget {CENSUS_BUDGET:?}",
            counts.join(", ")
        ),
    }
}

fn generic_samples(count: usize, rng: &mut ChaCha8Rng) -> Vec<(f64, f64, usize)> {
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let r = rng.gen_range(1.3..4.0);
        let a = rng.gen_range(0.5..full_parameter(r));
        let n = rng.gen_range(2..=10usize);
        let Ok(orbit) = PowerLawMap::new(a, r).and_then(|m| m.critical_orbit(n, false)) else {
            continue;
        };
        if orbit.values.iter().all(|w| w.abs() > GENERIC_MARGIN) {
            out.push((a, r, n));
        }
    }
    out
}

fn criterion_3(census: &[(f64, Vec<Superstable>)]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut cases: Vec<(f64, f64, usize)> =
        census.iter().flat_map(|(r, found)| found.iter().map(move |s| (s.a, *r, s.period()))).collect();
    cases.extend(generic_samples(GENERIC_SAMPLES, &mut rng));
    let (mut worst_id, mut worst_tel, mut errors) = (0.0f64, 0.0f64, 0usize);
    for &(a, r, n) in &cases {
        match (determinant_identity_residual(r, a, n), telescoping_sum(r, a, n)) {
            (Ok(res), Ok(t)) => {
                worst_id = worst_id.max(res.relative_residual);
                worst_tel = worst_tel.max((t - res.rhs).abs() / res.rhs.abs().max(1.0));
            }
            _ => errors += 1,
        }
    }
    Outcome {
        passed: errors == 0 && worst_id <= IDENTITY_TOL && worst_tel <= IDENTITY_TOL,
        detail: format!(
            "{} cases, max relative residual {worst_id:.1e}, max telescoping gap {worst_tel:.1e} (tol {IDENTITY_TOL:.0e}), {errors} errors",
            cases.len()
        ),
    }
}

fn criterion_4(census: &[(f64, Vec<Superstable>)]) -> Outcome {
    let (mut min_det, mut max_rho, mut errors, mut cases) = (f64::INFINITY, 0.0f64, 0usize, 0usize);
    for (r, found) in census {
        for s in found {
            cases += 1;
            match positivity_check(*r, s.a, s.period()) {
                Ok(p) => {
                    min_det = min_det.min(p.det);
                    max_rho = max_rho.max(p.spectral_radius);
                }
                Err(_) => errors += 1,
            }
        }
    }
    Outcome {
        passed: errors == 0 && cases > 0 && min_det > 0.0 && max_rho < 1.0 - CONTRACTION_MARGIN,
        detail: format!("{cases} fixed points, min det(I - DT) = {min_det:.4}, max rho = {max_rho:.4} (< {}), {errors} errors", 1.0 - CONTRACTION_MARGIN),
    }
}

fn criterion_5() -> Outcome {
    let started = Instant::now();
    let mut worst_full = 0.0f64;
    for r in [1.5, 2.0, 3.0] {
        let h = PowerLawMap::new(full_parameter(r), r)
            .and_then(|m| entropy_from_kneading(&m, 64, 1e-13))
            .map_or(f64::NAN, |e| e.value);
        worst_full = worst_full.max((h - LN_2).abs());
        if worst_full.is_nan() {
            break;
        }
    }
    let golden = ((1.0 + 5f64.sqrt()) / 2.0).ln();
    let h3 = find_superstable(2.0, &word("RLC"), 1e-15)
        .and_then(|a| PowerLawMap::new(a, 2.0))
        .and_then(|m| entropy_from_kneading(&m, 64, 1e-13))
        .map_or(f64::NAN, |e| e.value);
    let gap = (h3 - golden).abs();
    let elapsed = started.elapsed();
    Outcome {
        passed: worst_full <= FULL_MAP_TOL && gap <= GOLDEN_TOL && elapsed < ANCHOR_BUDGET,
        detail: format!(
            "max |h(a_full) - ln 2| = {worst_full:.1e} (tol {FULL_MAP_TOL:.0e}), |h(period 3) - ln phi| = {gap:.1e} (tol {GOLDEN_TOL:.0e})"
        ),
    }
}

fn criterion_6() -> Outcome {
    let started = Instant::now();
    let mut worst = (0.0f64, 0.0, 0.0);
    let mut failing = 0usize;
    let mut total = 0usize;
    for r in [2.0, 2.5] {
        for a in window_grid(r, 50) {
            total += 1;
            let Ok(map) = PowerLawMap::new(a, r) else {
                failing += 1;
                continue;
            };
            let (Ok(hk), Ok(hl)) = (entropy_from_kneading(&map, 64, 1e-13), entropy_from_laps(&map, 18)) else {
                failing += 1;
                continue;
            };
            let d = (hk.value - hl.value).abs();
            if d > AGREEMENT_TOL {
                failing += 1;
            }
            if d > worst.0 {
                worst = (d, a, r);
            }
        }
    }
    let elapsed = started.elapsed();
    Outcome {
        passed: failing == 0 && elapsed < AGREEMENT_BUDGET,
        detail: format!(
            "{failing}/{total} grid points beyond {AGREEMENT_TOL}; worst |h_kneading - h_laps| = {:.4} at a = {:.4}, r = {}",
            worst.0, worst.1, worst.2
        ),
    }
}

fn criterion_7() -> Outcome {
    let started = Instant::now();
    let cfg = SweepConfig::default();
    let mut word_violations = 0;
    let mut entropy_violations = 0;
    let mut max_backstep = 0.0f64;
    let mut errors = 0;
    for r in SWEEP_RS {
        match entropy_curve(r, &window_grid(r, SWEEP_POINTS), &cfg) {
            Ok(rep) => {
                word_violations += rep.count(ViolationKind::WordOrder);
                entropy_violations += rep.count(ViolationKind::EntropyOrder);
                max_backstep = max_backstep.max(rep.max_entropy_backstep);
            }
            Err(_) => errors += 1,
        }
    }
    let elapsed = started.elapsed();
    Outcome {
        passed: errors == 0 && word_violations == 0 && entropy_violations == 0 && elapsed < SWEEP_BUDGET,
        detail: format!(
            "{} grids x {SWEEP_POINTS}: {word_violations} word-order, {entropy_violations} entropy-order violations, max backstep {max_backstep:.1e}",
            SWEEP_RS.len()
        ),
    }
}

fn random_state(rng: &mut ChaCha8Rng) -> (ThurstonMap, Vec<f64>) {
    loop {
        let r = rng.gen_range(1.3..4.0);
        let m = rng.gen_range(1..=10usize);
        let signs: Vec<i8> = (0..m).map(|j| if j == 0 || rng.gen_bool(0.5) { 1 } else { -1 }).collect();
        let z1 = rng.gen_range(0.5..full_parameter(r));
        let mut z = vec![z1];
        z.extend((1..m).map(|_| rng.gen_range(-z1..z1)));
        let clearance = z[1..].iter().chain(std::iter::once(&0.0)).map(|w| z1 - w).fold(f64::INFINITY, f64::min);
        if clearance < JACOBIAN_CLEARANCE {
            continue;
        }
        let Ok(map) = SignPattern::new(signs).and_then(|s| ThurstonMap::new(s, r)) else {
            continue;
        };
        return (map, z);
    }
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    let mut errors = 0;
    for _ in 0..JACOBIAN_STATES {
        let (map, z) = random_state(&mut rng);
        match (map.jacobian(&z), map.central_difference_jacobian(&z, JACOBIAN_STEP)) {
            (Ok(j), Ok(fd)) => worst = worst.max(cli::max_relative_difference(j.matrix(), &fd)),
            _ => errors += 1,
        }
    }
    Outcome {
        passed: errors == 0 && worst <= JACOBIAN_TOL,
        detail: format!("{JACOBIAN_STATES} states, max entrywise relative difference {worst:.1e} (tol {JACOBIAN_TOL:.0e}, h = {JACOBIAN_STEP:.0e})"),
    }
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut r_pass = 0;
    let mut drawn = 0;
    while drawn < R_PROBES {
        let r = rng.gen_range(1.3..4.0);
        let a = rng.gen_range(0.5..full_parameter(r) - 1e-3);
        let Ok(orbit) = PowerLawMap::new(a, r).and_then(|m| m.critical_orbit(R_PROBE_DEPTH, false)) else {
            continue;
        };
        if orbit.closest_approach(R_PROBE_DEPTH).1 <= R_PROBE_MARGIN {
            continue;
        }
        drawn += 1;
        if r_continuity_probe(a, r, R_PROBE_DEPTH, R_PROBE_DELTA) == Ok(true) {
            r_pass += 1;
        }
    }
    let mut worst_jump = 0.0f64;
    let mut errors = 0;
    for _ in 0..ENTROPY_PROBES {
        let r = rng.gen_range(1.3..4.0);
        let a0 = rng.gen_range(0.5 + ENTROPY_PROBE_RADIUS..full_parameter(r) - ENTROPY_PROBE_RADIUS);
        match entropy_continuity_probe(r, a0, ENTROPY_PROBE_RADIUS, ENTROPY_PROBE_STEPS, 64) {
            Ok(j) => worst_jump = worst_jump.max(j),
            Err(_) => errors += 1,
        }
    }
    Outcome {
        passed: r_pass == R_PROBES && errors == 0 && worst_jump <= ENTROPY_JUMP_TOL,
        detail: format!(
            "r-probes {r_pass}/{R_PROBES} locally constant; entropy max jump {worst_jump:.1e} over {ENTROPY_PROBES} micro-grids (tol {ENTROPY_JUMP_TOL}), {errors} errors"
        ),
    }
}

fn capture(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(std::iter::once("kneadlab").chain(args.iter().copied()), &mut out, &mut err);
    out.extend(err);
    (code, out)
}

fn criterion_10() -> Outcome {
    let runs: [&[&str]; 3] = [
        &["sweep", "--r", "2", "--a-range", "0.5:2:400", "--laps", "--lap-depth", "12"],
        &["sweep", "--r", "2.5", "--a-range", "0.6:1.5:300", "--format", "json"],
        &["verify", "--r", "2", "--r", "2.5", "--seed", "17"],
    ];
    let mut identical = 0;
    for args in runs {
        let (c1, o1) = capture(args);
        let (c2, o2) = capture(args);
        if c1 == c2 && o1 == o2 && !o1.is_empty() {
            identical += 1;
        }
    }
    Outcome {
        passed: identical == runs.len(),
        detail: format!("{identical}/{} repeated runs byte-identical", runs.len()),
    }
}

fn main() {
    let mut all = true;
    let t = Instant::now();
    all &= report(1, "period-2 universality", t, criterion_1());

    let t = Instant::now();
    let census: Vec<(f64, Vec<Superstable>)> =
        CENSUS_RS.iter().map(|&r| (r, superstable_census(r, CENSUS_MAX_PERIOD, 1e-15))).collect();
    all &= report(2, "fixed-point lemma", t, criterion_2(&census, t.elapsed()));
    let t = Instant::now();
    all &= report(3, "determinant identity", t, criterion_3(&census));
    let t = Instant::now();
    all &= report(4, "positivity and contraction", t, criterion_4(&census));
    let t = Instant::now();
    all &= report(5, "entropy anchors", t, criterion_5());
    let t = Instant::now();
    all &= report(6, "two-method entropy agreement", t, criterion_6());
    let t = Instant::now();
    all &= report(7, "monotonicity sweeps", t, criterion_7());
    let t = Instant::now();
    all &= report(8, "Jacobian vs finite differences", t, criterion_8());
    let t = Instant::now();
    all &= report(9, "continuity probes", t, criterion_9());
    let t = Instant::now();
    all &= report(10, "determinism", t, criterion_10());

    if !all {
        std::process::exit(1);
    }
}
