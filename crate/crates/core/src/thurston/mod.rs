//! The Thurston map on critical-orbit vectors.
//!
//! For a sign pattern `sigma` of length `m = n - 1` and exponent `r`, the map
//! sends `z = (z_1, ..., z_m)` to
//!
//! ```text
//! c_j     = sigma_j (z_1 - z_{j+1})^{1/r}      j < m
//! c_m     = sigma_m (z_1 - anchor)^{1/r}
//! ```
//!
//! With `anchor = 0` its fixed points are exactly the critical orbits of
//! superstable parameters of period `n` with itinerary `sigma` followed by
//! `C`. A nonzero anchor `w_n(a_0)` extends the construction to a generic
//! parameter, where `omega = (w_1, ..., w_{n-1})` is still fixed.

mod identity;
mod spectral;
mod superstable;

pub use identity::{
    determinant_identity_residual, positivity_check, telescoping_sum, IdentityResidual,
    Positivity, NEAR_CRITICAL_CUTOFF,
};
pub use spectral::{matrix_spectral_radius, spectral_radius};
pub use superstable::{
    bisect_superstable, candidate_words, find_superstable, superstable_bracket,
    superstable_census, Superstable,
};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::kneading::{compare_symbols, KneadingWord, Symbol};

/// `sigma_j = sgn(w_j)`, one sign per coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignPattern(Vec<i8>);

impl SignPattern {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.is_empty() {
            return Err(Error::InvalidParameter("sign pattern must be non-empty".into()));
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidParameter("signs must be +1 or -1".into()));
        }
        Ok(Self(signs))
    }

    /// `+1` for `R`, `-1` for `L`; a `C` is rejected.
    pub fn from_symbols(symbols: &[Symbol]) -> Result<Self> {
        let signs = symbols
            .iter()
            .map(|s| match s {
                Symbol::R => Ok(1),
                Symbol::L => Ok(-1),
                Symbol::C => Err(Error::InvalidWord("sign pattern cannot contain C".into())),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(signs)
    }

    /// The pattern of a superstable word `e_1 ... e_{n-1} C`.
    pub fn from_word(word: &KneadingWord) -> Result<Self> {
        if !word.terminated_at_c() {
            return Err(Error::InvalidWord(format!("{word} does not end in C")));
        }
        Self::from_symbols(word.free_prefix())
    }

    pub fn from_values(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&w| if w > 0.0 { 1 } else { -1 }).collect())
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A state `(z_1, ..., z_{n-1})` of the Thurston map.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalOrbitVector(pub Vec<f64>);

impl CriticalOrbitVector {
    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Points placed in the order their itineraries prescribe: point `j`
    /// has itinerary `e_j ... e_{n-1} C`, and ranking these in the signed
    /// lexicographic order (with the critical point `C` at `0`) gives the
    /// order of the superstable orbit on the line. The guess puts the points
    /// at equal spacing in that order inside `[-1, 1]`. Every inverse branch
    /// preserves this order, so Picard iteration started here keeps `z_1`
    /// the largest entry and never leaves the branch domain when the word is
    /// admissible.
    pub fn default_guess(signs: &SignPattern) -> Self {
        let m = signs.len();
        let mut symbols: Vec<Symbol> =
            signs.signs().iter().map(|&s| if s > 0 { Symbol::R } else { Symbol::L }).collect();
        symbols.push(Symbol::C);
        // 0..m are z_1..z_m, m is the critical point
        let mut order: Vec<usize> = (0..=m).collect();
        order.sort_by(|&i, &j| compare_symbols(&symbols[i..], &symbols[j..]));
        let center = order.iter().position(|&i| i == m).expect("critical point ranked");
        let spacing = 1.0 / center.max(m - center).max(1) as f64;
        let mut z = vec![0.0; m];
        for (rank, &i) in order.iter().enumerate() {
            if i < m {
                z[i] = (rank as f64 - center as f64) * spacing;
            }
        }
        Self(z)
    }

    pub fn max_distance(&self, other: &[f64]) -> f64 {
        self.0.iter().zip(other).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }
}

/// Dense Jacobian of the Thurston map. Nonzero entries sit in the first
/// column and on the superdiagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct ThurstonJacobian(DMatrix<f64>);

impl ThurstonJacobian {
    pub fn from_matrix(matrix: DMatrix<f64>) -> Self {
        Self(matrix)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    /// `det(I - J)` by dense LU.
    pub fn det_i_minus(&self) -> f64 {
        let n = self.dim();
        (DMatrix::identity(n, n) - &self.0).lu().determinant()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThurstonMap {
    signs: SignPattern,
    r: f64,
    anchor: f64,
}

impl ThurstonMap {
    pub fn new(signs: SignPattern, r: f64) -> Result<Self> {
        Self::with_anchor(signs, r, 0.0)
    }

    pub fn with_anchor(signs: SignPattern, r: f64, anchor: f64) -> Result<Self> {
        if !r.is_finite() || r <= 1.0 {
            return Err(Error::InvalidParameter(format!("exponent r = {r} must exceed 1")));
        }
        Ok(Self { signs, r, anchor })
    }

    pub fn signs(&self) -> &SignPattern {
        &self.signs
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn dim(&self) -> usize {
        self.signs.len()
    }

    /// The positive root arguments `z_1 - z_{j+1}` (last: `z_1 - anchor`).
    fn arguments(&self, z: &[f64]) -> Result<Vec<f64>> {
        let m = self.dim();
        if z.len() != m {
            return Err(Error::InvalidParameter(format!(
                "state has {} entries, sign pattern has {m}",
                z.len()
            )));
        }
        (0..m)
            .map(|j| {
                let other = if j + 1 < m { z[j + 1] } else { self.anchor };
                let arg = z[0] - other;
                if arg > 0.0 {
                    Ok(arg)
                } else {
                    Err(Error::BranchDomain { index: j + 2, value: arg })
                }
            })
            .collect()
    }

    pub fn apply(&self, z: &[f64]) -> Result<Vec<f64>> {
        let rho = 1.0 / self.r;
        let args = self.arguments(z)?;
        Ok(args
            .iter()
            .zip(self.signs.signs())
            .map(|(arg, &s)| f64::from(s) * arg.powf(rho))
            .collect())
    }

    pub fn jacobian(&self, z: &[f64]) -> Result<ThurstonJacobian> {
        let m = self.dim();
        let rho = 1.0 / self.r;
        let args = self.arguments(z)?;
        let mut j = DMatrix::zeros(m, m);
        for (row, (arg, &s)) in args.iter().zip(self.signs.signs()).enumerate() {
            let d = f64::from(s) * rho * arg.powf(rho - 1.0);
            j[(row, 0)] += d;
            if row + 1 < m {
                j[(row, row + 1)] = -d;
            }
        }
        Ok(ThurstonJacobian(j))
    }

    /// Component `c_row` of `T(z)`; depends on `z_1` and `z_{row+2}` only.
    pub fn component(&self, row: usize, z: &[f64]) -> Result<f64> {
        let m = self.dim();
        if z.len() != m || row >= m {
            return Err(Error::InvalidParameter(format!("component {row} of a {}-state, pattern length {m}", z.len())));
        }
        let other = if row + 1 < m { z[row + 1] } else { self.anchor };
        let arg = z[0] - other;
        if arg > 0.0 {
            Ok(f64::from(self.signs.signs()[row]) * arg.powf(1.0 / self.r))
        } else {
            Err(Error::BranchDomain { index: row + 2, value: arg })
        }
    }

    /// Central differences of [`ThurstonMap::apply`] with step `h`.
    pub fn central_difference_jacobian(&self, z: &[f64], h: f64) -> Result<DMatrix<f64>> {
        self.difference_jacobian(z, |_| h)
    }

    /// Central differences with row `j` stepped by `base * min(1, z_1 - z_{j+1})`.
    /// The root is singular where its argument vanishes, and a single step
    /// cannot suit tiny and large arguments at once.
    pub fn row_scaled_difference_jacobian(&self, z: &[f64], base: f64) -> Result<DMatrix<f64>> {
        let args = self.arguments(z)?;
        self.difference_jacobian(z, |row| base * args[row].min(1.0))
    }

    fn difference_jacobian(&self, z: &[f64], step: impl Fn(usize) -> f64) -> Result<DMatrix<f64>> {
        let m = self.dim();
        self.arguments(z)?;
        let mut out = DMatrix::zeros(m, m);
        let mut zp = z.to_vec();
        let mut zm = z.to_vec();
        for row in 0..m {
            let h = step(row);
            for col in 0..m {
                zp[col] = z[col] + h;
                zm[col] = z[col] - h;
                // the step actually taken, after rounding
                let width = zp[col] - zm[col];
                out[(row, col)] = (self.component(row, &zp)? - self.component(row, &zm)?) / width;
                zp[col] = z[col];
                zm[col] = z[col];
            }
        }
        Ok(out)
    }
}

/// `T(z)` with the critical point as anchor.
pub fn thurston_apply(z: &CriticalOrbitVector, signs: &SignPattern, r: f64) -> Result<CriticalOrbitVector> {
    ThurstonMap::new(signs.clone(), r)?.apply(z.entries()).map(CriticalOrbitVector)
}

pub fn thurston_jacobian(z: &CriticalOrbitVector, signs: &SignPattern, r: f64) -> Result<ThurstonJacobian> {
    ThurstonMap::new(signs.clone(), r)?.jacobian(z.entries())
}

/// Default iteration cap for [`thurston_fixed_point`].
pub const DEFAULT_MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPoint {
    pub omega: CriticalOrbitVector,
    pub iterations: usize,
    /// Picard iteration stalled and Newton's method finished the solve.
    pub newton_fallback: bool,
}

impl FixedPoint {
    /// The superstable parameter `a = w_1`.
    pub fn parameter(&self) -> f64 {
        self.omega.0[0]
    }
}

/// Picard iteration `z <- T(z)` until `|T(z) - z|_inf <= tol`.
///
/// Leaving the branch domain aborts with
/// [`Error::BranchDomainDuringIteration`]. If `max_iter` Picard steps do not
/// converge, Newton's method with backtracking is tried from the last
/// iterate before giving up with [`Error::NoConvergence`].
pub fn thurston_fixed_point(
    signs: &SignPattern,
    r: f64,
    init: &CriticalOrbitVector,
    tol: f64,
    max_iter: usize,
) -> Result<FixedPoint> {
    let map = ThurstonMap::new(signs.clone(), r)?;
    let mut z = init.0.clone();
    let mut residual = f64::INFINITY;
    for iteration in 1..=max_iter {
        let tz = map.apply(&z).map_err(|e| Error::BranchDomainDuringIteration {
            iteration,
            iterate: z.clone(),
            source: Box::new(e),
        })?;
        residual = z.iter().zip(&tz).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if residual <= tol {
            return Ok(FixedPoint { omega: CriticalOrbitVector(z), iterations: iteration, newton_fallback: false });
        }
        z = tz;
    }
    newton(&map, z, tol, max_iter, residual)
}

fn newton(map: &ThurstonMap, mut z: Vec<f64>, tol: f64, picard_steps: usize, picard_residual: f64) -> Result<FixedPoint> {
    const MAX_STEPS: usize = 100;
    let m = map.dim();
    let residual_of = |z: &[f64]| -> Option<(Vec<f64>, f64)> {
        let tz = map.apply(z).ok()?;
        let g: Vec<f64> = tz.iter().zip(z).map(|(t, x)| t - x).collect();
        let norm = g.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        Some((g, norm))
    };
    let Some((mut g, mut norm)) = residual_of(&z) else {
        return Err(Error::NoConvergence { iterations: picard_steps, residual: picard_residual });
    };
    for step in 1..=MAX_STEPS {
        if norm <= tol {
            return Ok(FixedPoint {
                omega: CriticalOrbitVector(z),
                iterations: picard_steps + step,
                newton_fallback: true,
            });
        }
        let jac = map.jacobian(&z)?;
        let lhs = DMatrix::identity(m, m) - jac.matrix();
        let Some(delta) = lhs.lu().solve(&DVector::from_vec(g.clone())) else {
            break;
        };
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let trial: Vec<f64> = z.iter().zip(delta.iter()).map(|(x, d)| x + lambda * d).collect();
            if let Some((g_new, n_new)) = residual_of(&trial) {
                if n_new < norm {
                    z = trial;
                    g = g_new;
                    norm = n_new;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    Err(Error::NoConvergence { iterations: picard_steps, residual: picard_residual.min(norm) })
}
