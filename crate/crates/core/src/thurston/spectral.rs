use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ThurstonJacobian;

const RESTARTS: usize = 4;
const MAX_SQUARINGS: usize = 64;
/// Largest dimension for which the characteristic-polynomial cross-check runs.
const COMPANION_MAX_DIM: usize = 6;

pub fn spectral_radius(jacobian: &ThurstonJacobian, tol: f64, seed: u64) -> f64 {
    matrix_spectral_radius(jacobian.matrix(), tol, seed)
}

/// `max |lambda|` over the eigenvalues of `m`.
///
/// Power iteration on the repeated squares `m^{2^k}` from several seeded
/// random start vectors gives `|m^{2^k} x|^{1/2^k} -> rho`; squaring keeps
/// the iteration count logarithmic in the accuracy. For dimension at most
/// six the roots of the characteristic polynomial are computed as well and,
/// when the two agree, the (sharper) polynomial value is returned.
pub fn matrix_spectral_radius(m: &DMatrix<f64>, tol: f64, seed: u64) -> f64 {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "spectral radius of a non-square matrix");
    if n == 0 {
        return 0.0;
    }
    let power = power_estimate(m, tol, seed);
    if power == 0.0 || n > COMPANION_MAX_DIM {
        return power;
    }
    let companion = characteristic_roots(m)
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if (companion - power).abs() <= 1e-6 * power.max(1.0) {
        companion
    } else {
        power
    }
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

fn power_estimate(m: &DMatrix<f64>, tol: f64, seed: u64) -> f64 {
    let n = m.nrows();
    let scale = max_abs(m);
    if scale == 0.0 {
        return 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts: Vec<DVector<f64>> = (0..RESTARTS)
        .map(|_| {
            let v = DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
            let norm = v.norm();
            v / norm
        })
        .collect();

    // a = m^{2^k} / exp(log_norm), kept at unit max-entry.
    let mut a = m / scale;
    let mut log_norm = scale.ln();
    let mut previous = f64::NAN;
    for k in 0..=MAX_SQUARINGS {
        let exponent = 2f64.powi(k as i32);
        let estimate = starts
            .iter()
            .filter_map(|x| {
                let y = (&a * x).norm();
                (y > 0.0).then(|| ((log_norm + y.ln()) / exponent).exp())
            })
            .fold(0.0, f64::max);
        if k >= 3 && (estimate - previous).abs() <= tol * estimate.max(1.0) {
            return estimate;
        }
        previous = estimate;

        let squared = &a * &a;
        let norm = max_abs(&squared);
        if norm == 0.0 || !norm.is_finite() {
            // nilpotent
            return 0.0;
        }
        a = squared / norm;
        log_norm = 2.0 * log_norm + norm.ln();
    }
    previous
}

/// Eigenvalues as roots of the characteristic polynomial (Faddeev-LeVerrier
/// coefficients, Durand-Kerner roots).
fn characteristic_roots(m: &DMatrix<f64>) -> Vec<Complex64> {
    let n = m.nrows();
    // p(x) = x^n + c[1] x^{n-1} + ... + c[n]
    let mut coeffs = vec![1.0; n + 1];
    let mut mk = DMatrix::<f64>::zeros(n, n);
    let identity = DMatrix::<f64>::identity(n, n);
    for k in 1..=n {
        mk = m * (&mk + &identity * coeffs[k - 1]);
        coeffs[k] = -mk.trace() / k as f64;
    }

    let bound = 1.0 + coeffs[1..].iter().fold(0.0f64, |acc, c| acc.max(c.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|i| seed.powu(i as u32) * bound).collect();
    let eval = |z: Complex64| coeffs.iter().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
    for _ in 0..2000 {
        let mut change = 0.0f64;
        for i in 0..n {
            let denom = (0..n)
                .filter(|&j| j != i)
                .fold(Complex64::new(1.0, 0.0), |acc, j| acc * (roots[i] - roots[j]));
            if denom.norm() == 0.0 {
                continue;
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            change = change.max(step.norm());
        }
        if change <= 1e-15 * bound {
            break;
        }
    }
    roots
}
