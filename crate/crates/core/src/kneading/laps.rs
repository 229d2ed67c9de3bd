use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::kneading::series::{EntropyEstimate, EntropyMethod};
use crate::map::PowerLawMap;

/// Default cap on the number of preimage-tree nodes generated by
/// [`lap_count`].
pub const DEFAULT_NODE_BUDGET: usize = 1 << 24;

/// Values of `y` this close to the critical value `a` (relative to
/// `max(a, 1)`) are treated as equal to it. Without the snap, a preimage
/// chain that should return to `0` lands at `a - O(ulp)` and spawns a
/// spurious pair of turning points at `+-(ulp)^{1/r}`.
const CRITICAL_VALUE_SNAP: f64 = 1e-13;

/// Turning points within this fraction of the core-interval length of an
/// endpoint are boundary points and do not split a lap.
const EDGE_FRACTION: f64 = 1e-12;

/// All `x` with `f(x) = y`, in increasing order.
pub fn critical_preimages(map: &PowerLawMap, y: f64) -> Vec<f64> {
    let a = map.a();
    if y > a {
        Vec::new()
    } else if y == a {
        vec![0.0]
    } else {
        let x = (a - y).powf(1.0 / map.r());
        vec![-x, x]
    }
}

fn snapped_preimages(map: &PowerLawMap, y: f64) -> Vec<f64> {
    let a = map.a();
    if (a - y).abs() <= CRITICAL_VALUE_SNAP * a.max(1.0) {
        vec![0.0]
    } else {
        critical_preimages(map, y)
    }
}

/// Lap number `l(f^n)` on the core interval, counted as one plus the number
/// of distinct interior points of `f^{-j}(0)`, `0 <= j < n`.
pub fn lap_count(map: &PowerLawMap, n: usize) -> Result<u64> {
    lap_count_with_budget(map, n, DEFAULT_NODE_BUDGET)
}

pub fn lap_count_with_budget(map: &PowerLawMap, n: usize, budget: usize) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidParameter("lap depth must be at least 1".into()));
    }
    let (lo, hi) = map.core_interval()?;
    let edge = EDGE_FRACTION * (hi - lo);
    let in_closed = |x: f64| x >= lo - edge && x <= hi + edge;
    let in_open = |x: f64| x > lo + edge && x < hi - edge;

    let mut seen: HashSet<u64> = HashSet::new();
    let mut interior: u64 = 0;
    let mut nodes = 0usize;
    let mut level: Vec<f64> = if in_closed(0.0) { vec![0.0] } else { Vec::new() };

    // Breadth-first, so every point is reached first at its lowest level and
    // a repeated point's subtree has already been expanded far enough.
    for depth in 0..n {
        let mut next = Vec::new();
        for &y in &level {
            let y = if y == 0.0 { 0.0 } else { y };
            if !seen.insert(y.to_bits()) {
                continue;
            }
            if in_open(y) {
                interior += 1;
            }
            if depth + 1 < n {
                next.extend(snapped_preimages(map, y).into_iter().filter(|&x| in_closed(x)));
            }
        }
        nodes += next.len();
        if nodes > budget {
            return Err(Error::DepthTooLarge { depth: depth + 1, budget });
        }
        if next.is_empty() {
            break;
        }
        level = next;
    }
    Ok(1 + interior)
}

/// `h ~ log(l(f^depth)) / depth`.
///
/// The error bound `log l (1/d - 1/(d+1)) + log 2 / d` is a documented
/// slack, not a rigorous bound: the estimator converges like `O(log n / n)`
/// wherever lap numbers grow polynomially.
pub fn entropy_from_laps(map: &PowerLawMap, depth: usize) -> Result<EntropyEstimate> {
    if depth < 8 {
        return Err(Error::InvalidParameter(format!("lap depth {depth} is below 8")));
    }
    let laps = lap_count(map, depth)? as f64;
    let d = depth as f64;
    let log_laps = laps.ln();
    Ok(EntropyEstimate {
        value: log_laps / d,
        method: EntropyMethod::LapGrowth,
        depth,
        error_bound: log_laps * (1.0 / d - 1.0 / (d + 1.0)) + std::f64::consts::LN_2 / d,
        no_root: false,
    })
}
