//! The determinant identity
//!
//! ```text
//! d/da f^n(0) / (f^{n-1})'(f(0)) = det(I - DT(omega)) = sum_{k<n} 1 / (f^k)'(f(0))
//! ```
//!
//! checked by computing each side along an independent route.

use super::{spectral_radius, SignPattern, ThurstonJacobian, ThurstonMap};
use crate::error::{Error, Result};
use crate::map::{OrbitBuffer, PowerLawMap, SignedLogProduct};

/// Below this distance from the critical point a orbit point counts as `C`.
pub const NEAR_CRITICAL_CUTOFF: f64 = 1e-8;

/// Tolerance on `|f^n(0)|` for a parameter to count as superstable.
const SUPERSTABLE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityResidual {
    pub lhs: f64,
    pub rhs: f64,
    pub relative_residual: f64,
}

fn checked_orbit(r: f64, a0: f64, n: usize) -> Result<(PowerLawMap, OrbitBuffer)> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("identity needs n >= 2, got {n}")));
    }
    let map = PowerLawMap::new(a0, r)?;
    let orbit = map.critical_orbit(n, true)?;
    let (step, min_abs) = orbit.closest_approach(n - 1);
    if min_abs <= NEAR_CRITICAL_CUTOFF {
        return Err(Error::NearCriticalOrbit { step, min_abs });
    }
    Ok((map, orbit))
}

/// Thurston map anchored at `w_n(a_0)`, so that `omega` is fixed even away
/// from superstable parameters, with its Jacobian at `omega`.
fn anchored_jacobian(r: f64, orbit: &OrbitBuffer, n: usize) -> Result<ThurstonJacobian> {
    let omega = &orbit.values[..n - 1];
    let map = ThurstonMap::with_anchor(SignPattern::from_values(omega)?, r, orbit.values[n - 1])?;
    map.jacobian(omega)
}

/// `lhs = D_n / prod_{j<n} f'(w_j)` from the parameter-derivative recursion;
/// `rhs = det(I - J)` from a dense LU of the Thurston Jacobian at `omega`.
pub fn determinant_identity_residual(r: f64, a0: f64, n: usize) -> Result<IdentityResidual> {
    let (map, orbit) = checked_orbit(r, a0, n)?;
    let d_n = orbit.param_derivs.as_ref().expect("requested")[n - 1];
    let lhs = map.orbit_derivative_product(n).divide(d_n);
    let rhs = anchored_jacobian(r, &orbit, n)?.det_i_minus();
    let scale = lhs.abs().max(rhs.abs()).max(1e-30);
    Ok(IdentityResidual { lhs, rhs, relative_residual: (lhs - rhs).abs() / scale })
}

/// `sum_{k=0}^{n-1} 1 / prod_{j=1}^{k} f'(w_j)`.
pub fn telescoping_sum(r: f64, a0: f64, n: usize) -> Result<f64> {
    if n == 1 {
        PowerLawMap::new(a0, r)?;
        return Ok(1.0);
    }
    let (map, orbit) = checked_orbit(r, a0, n)?;
    let mut product = SignedLogProduct::one();
    let mut sum = 1.0;
    for &w in &orbit.values[..n - 1] {
        product.mul(map.phase_derivative(w));
        sum += product.divide(1.0);
    }
    Ok(sum)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Positivity {
    pub det: f64,
    pub spectral_radius: f64,
    pub ok: bool,
}

/// At a superstable parameter of period `n`: `det(I - DT) > 0` and the
/// spectral radius of `DT` below one.
pub fn positivity_check(r: f64, a0: f64, n: usize) -> Result<Positivity> {
    let not_superstable = |detail: String| Error::NotSuperstable { a: a0, n, detail };
    let (_, orbit) = checked_orbit(r, a0, n).map_err(|e| match e {
        Error::NearCriticalOrbit { step, min_abs } => {
            not_superstable(format!("|w_{step}| = {min_abs:e} before step {n}"))
        }
        other => other,
    })?;
    let w_n = orbit.values[n - 1];
    if w_n.abs() > SUPERSTABLE_TOL {
        return Err(not_superstable(format!("|f^{n}(0)| = {:e}", w_n.abs())));
    }
    let omega = &orbit.values[..n - 1];
    let jac = ThurstonMap::new(SignPattern::from_values(omega)?, r)?.jacobian(omega)?;
    let det = jac.det_i_minus();
    let rho = spectral_radius(&jac, 1e-12, 0);
    Ok(Positivity { det, spectral_radius: rho, ok: det > 0.0 && rho < 1.0 })
}
