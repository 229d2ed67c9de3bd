use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kneading::word::{itinerary, KneadingWord};
use crate::map::PowerLawMap;

/// Coefficients `eps_1..eps_N` of the truncated kneading determinant
/// `D_N(t) = 1 + sum eps_n t^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KneadingSeries {
    coefficients: Vec<i8>,
    /// The source word ended in `C`, so every later coefficient is zero and
    /// the polynomial is the whole series.
    exact: bool,
}

/// `eps_n = theta(e_1) ... theta(e_n)` with `theta(L) = 1`, `theta(R) = -1`,
/// `theta(C) = 0`; one coefficient per symbol of the word.
pub fn kneading_coefficients(word: &KneadingWord) -> KneadingSeries {
    let mut eps = 1i8;
    let coefficients = word
        .symbols()
        .iter()
        .map(|s| {
            eps *= s.orientation();
            eps
        })
        .collect();
    KneadingSeries { coefficients, exact: word.terminated_at_c() }
}

impl KneadingSeries {
    /// Builds a series directly from coefficients. Fails if a zero is
    /// followed by a nonzero coefficient or a value lies outside `{-1, 0, 1}`.
    pub fn from_coefficients(coefficients: Vec<i8>) -> Result<Self> {
        if coefficients.iter().any(|c| !(-1..=1).contains(c)) {
            return Err(Error::InvalidParameter("coefficients must lie in {-1, 0, 1}".into()));
        }
        let exact = match coefficients.iter().position(|&c| c == 0) {
            Some(first_zero) => {
                if coefficients[first_zero..].iter().any(|&c| c != 0) {
                    return Err(Error::InvalidParameter(
                        "a zero coefficient must be followed by zeros".into(),
                    ));
                }
                true
            }
            None => false,
        };
        Ok(Self { coefficients, exact })
    }

    pub fn coefficients(&self) -> &[i8] {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Extends an exact series with zeros up to `n` coefficients.
    pub fn padded(mut self, n: usize) -> Self {
        if self.exact && self.coefficients.len() < n {
            self.coefficients.resize(n, 0);
        }
        self
    }

    /// `D_N(t)` by Horner's rule.
    pub fn eval(&self, t: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, &c| acc * t + f64::from(c)) * t + 1.0
    }

    /// `D_N'(t)`.
    pub fn derivative(&self, t: f64) -> f64 {
        self.coefficients
            .iter()
            .enumerate()
            .rev()
            .fold(0.0, |acc, (i, &c)| acc * t + (i as f64 + 1.0) * f64::from(c))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KneadingRoot {
    pub t0: f64,
    /// Bound on `|D(t0) - D_N(t0)|`; zero for exact series.
    pub tail_bound: f64,
    /// No zero of `D_N` in `(0, 1)`; `t0 = 1` and the entropy is zero.
    pub no_root: bool,
    /// Interval certain to contain the smallest zero of the full series in
    /// `(0, 1]` (modulo the grid resolution of the scan).
    pub enclosure: (f64, f64),
}

/// Smallest zero of `D_N` in `(0, 1]`: sign scan on a grid of step
/// `1/(4N)`, repeated at half the step if nothing is found, then bisection
/// down to `tol`.
pub fn smallest_positive_root(series: &KneadingSeries, tol: f64) -> Result<KneadingRoot> {
    let n = series.len();
    if n < 8 {
        return Err(Error::InvalidParameter(format!(
            "kneading series needs at least 8 coefficients, got {n}"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter("root tolerance must be positive".into()));
    }

    let bracket = scan_for_sign_change(series, 4 * n).or_else(|| scan_for_sign_change(series, 8 * n));
    let t0 = bracket.map_or(1.0, |(lo, hi)| refine(series, lo, hi, tol));
    let no_root = t0 >= 1.0 - tol;
    let t0 = if no_root { 1.0 } else { t0 };
    let tail_bound = if series.is_exact() {
        0.0
    } else if no_root {
        f64::INFINITY
    } else {
        tail(n, t0)
    };
    let enclosure = if series.is_exact() {
        ((t0 - tol).max(0.0), (t0 + tol).min(1.0))
    } else {
        truncation_enclosure(series, tol)
    };
    Ok(KneadingRoot { t0, tail_bound, no_root, enclosure })
}

/// `sum_{k > n} t^k`, which bounds `|D(t) - D_n(t)|` for coefficients in
/// `{-1, 0, 1}`.
fn tail(n: usize, t: f64) -> f64 {
    t.powi(n as i32 + 1) / (1.0 - t)
}

/// The full series cannot vanish while `D_n > tail`, and must have
/// vanished once `D_n < -tail` (it starts at `D(0) = 1`). The first grid
/// cell where each condition fails or holds, refined by bisection, brackets
/// its smallest zero.
fn truncation_enclosure(series: &KneadingSeries, tol: f64) -> (f64, f64) {
    let n = series.len();
    let cells = 16 * n;
    // a sign change of D_n lies inside a window where |D_n| <= tail that can
    // be narrower than a grid cell, so crossing zero counts as well
    let not_excluded = |t: f64| {
        let d = series.eval(t);
        d <= 0.0 || d.abs() <= tail(n, t)
    };
    let forced = |t: f64| series.eval(t) < -tail(n, t);
    let first = |pred: &dyn Fn(f64) -> bool| -> f64 {
        let mut prev = 0.0;
        for k in 1..cells {
            let t = k as f64 / cells as f64;
            if pred(t) {
                let (mut lo, mut hi) = (prev, t);
                while hi - lo > tol {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if pred(mid) {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                return lo;
            }
            prev = t;
        }
        1.0
    };
    (first(&not_excluded), first(&forced))
}

fn scan_for_sign_change(series: &KneadingSeries, cells: usize) -> Option<(f64, f64)> {
    let mut prev = 0.0;
    for k in 1..=cells {
        let t = k as f64 / cells as f64;
        if series.eval(t) <= 0.0 {
            return Some((prev, t));
        }
        prev = t;
    }
    None
}

/// Bisection on `[lo, hi]` with `D(lo) > 0 >= D(hi)`.
fn refine(series: &KneadingSeries, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    if series.eval(hi) == 0.0 {
        // Exact zero on the grid; there is no earlier sign change.
        return hi;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if series.eval(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyMethod {
    KneadingRoot,
    LapGrowth,
}

/// Topological entropy in nats with an estimator error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyEstimate {
    pub value: f64,
    pub method: EntropyMethod,
    pub depth: usize,
    pub error_bound: f64,
    /// Set by the kneading estimator when `D_N` has no zero in `(0, 1)`.
    pub no_root: bool,
}

/// Lap numbers satisfy `l(f^n) <= 2^n`, so no estimate or error bound needs
/// to exceed `log 2`.
pub(crate) const MAX_ENTROPY: f64 = std::f64::consts::LN_2;

/// `h = -log t0` from the depth-`n` kneading determinant (itinerary taken
/// with `c_tol = 0`).
pub fn entropy_from_kneading(map: &PowerLawMap, n: usize, tol: f64) -> Result<EntropyEstimate> {
    entropy_from_kneading_with_ctol(map, n, tol, 0.0)
}

pub fn entropy_from_kneading_with_ctol(
    map: &PowerLawMap,
    n: usize,
    tol: f64,
    c_tol: f64,
) -> Result<EntropyEstimate> {
    if n < 16 {
        return Err(Error::InvalidParameter(format!("series depth {n} is below 16")));
    }
    let word = itinerary(map, n, c_tol)?;
    entropy_from_word(&word, n, tol)
}

/// Entropy from an already computed itinerary, padded to `n` coefficients
/// when it ends in `C`.
pub fn entropy_from_word(word: &KneadingWord, n: usize, tol: f64) -> Result<EntropyEstimate> {
    let series = kneading_coefficients(word).padded(n);
    let root = smallest_positive_root(&series, tol)?;
    let value = (-root.t0.ln()).max(0.0);

    // Entropy interval from the root enclosure, widened by the bisection
    // width; every estimate lies in [0, log 2].
    let (t_lo, t_hi) = root.enclosure;
    let h_upper = (-t_lo.ln()).min(MAX_ENTROPY);
    let h_lower = (-t_hi.ln()).max(0.0);
    let error_bound = ((h_upper - value).max(value - h_lower).max(0.0) + tol / root.t0).min(MAX_ENTROPY);
    Ok(EntropyEstimate {
        value,
        method: EntropyMethod::KneadingRoot,
        depth: series.len(),
        error_bound,
        no_root: root.no_root,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(c: Vec<i8>) -> KneadingSeries {
        KneadingSeries::from_coefficients(c).unwrap()
    }

    #[test]
    fn coefficient_examples() {
        let c = |s: &str| kneading_coefficients(&s.parse().unwrap()).coefficients().to_vec();
        assert_eq!(c("RLLLL"), vec![-1, -1, -1, -1, -1]);
        assert_eq!(c("RC"), vec![-1, 0]);
        assert_eq!(c("LLL"), vec![1, 1, 1]);
    }

    #[test]
    fn from_coefficients_validates() {
        assert!(KneadingSeries::from_coefficients(vec![1, 0, 1]).is_err());
        assert!(KneadingSeries::from_coefficients(vec![2]).is_err());
        assert!(series(vec![-1, 0, 0]).is_exact());
        assert!(!series(vec![-1, 1]).is_exact());
    }

    #[test]
    fn horner_matches_direct_sum() {
        let s = series(vec![-1, 1, 1, -1, -1, 1, -1, 1, 1]);
        let t = 0.7f64;
        let direct: f64 = 1.0
            + s.coefficients()
                .iter()
                .enumerate()
                .map(|(i, &c)| f64::from(c) * t.powi(i as i32 + 1))
                .sum::<f64>();
        assert!((s.eval(t) - direct).abs() < 1e-14);
        let h = 1e-6;
        let fd = (s.eval(t + h) - s.eval(t - h)) / (2.0 * h);
        assert!((s.derivative(t) - fd).abs() < 1e-7);
    }

    #[test]
    fn root_of_full_map_series() {
        // D(t) = (1 - 2t)/(1 - t) up to truncation
        let root = smallest_positive_root(&series(vec![-1; 64]), 1e-13).unwrap();
        assert!((root.t0 - 0.5).abs() < 1e-10);
        assert!(!root.no_root);
        assert!(root.tail_bound < 1e-18);
    }

    #[test]
    fn all_positive_series_has_no_root() {
        let root = smallest_positive_root(&series(vec![1; 40]), 1e-12).unwrap();
        assert_eq!(root.t0, 1.0);
        assert!(root.no_root);
    }

    #[test]
    fn period_two_series_vanishes_only_at_one() {
        let mut c = vec![0; 32];
        c[0] = -1;
        let root = smallest_positive_root(&series(c), 1e-12).unwrap();
        assert_eq!(root.t0, 1.0);
        assert!(root.no_root);
        assert_eq!(root.tail_bound, 0.0);
    }

    #[test]
    fn short_series_rejected() {
        assert!(smallest_positive_root(&series(vec![-1; 7]), 1e-12).is_err());
    }

    #[test]
    fn entropy_examples() {
        let h = entropy_from_kneading(&PowerLawMap::new(2.0, 2.0).unwrap(), 64, 1e-12).unwrap();
        assert!((h.value - std::f64::consts::LN_2).abs() < 1e-3);

        let h = entropy_from_kneading(&PowerLawMap::new(1.0, 2.0).unwrap(), 64, 1e-12).unwrap();
        assert_eq!(h.value, 0.0);
        assert!(h.no_root);

        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        let h = entropy_from_kneading(&PowerLawMap::new(1.754_878, 2.0).unwrap(), 64, 1e-12).unwrap();
        assert!((h.value - golden.ln()).abs() < 2e-3, "{}", h.value);
    }

    #[test]
    fn entropy_needs_depth_sixteen() {
        let m = PowerLawMap::new(2.0, 2.0).unwrap();
        assert!(entropy_from_kneading(&m, 15, 1e-12).is_err());
    }

    #[test]
    fn enclosure_brackets_the_root() {
        for k in 0..400 {
            let a = 1.0 + k as f64 / 400.0;
            let word = itinerary(&PowerLawMap::new(a, 2.0).unwrap(), 64, 0.0).unwrap();
            let root = smallest_positive_root(&kneading_coefficients(&word).padded(64), 1e-13).unwrap();
            let (lo, hi) = root.enclosure;
            assert!(lo <= root.t0 + 1e-13 && root.t0 <= hi + 1e-13, "a={a}: {root:?}");
        }
    }
}
