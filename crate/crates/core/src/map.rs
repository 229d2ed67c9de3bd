//! The power-law unimodal family `f_a(x) = a - |x|^r` and its critical orbit.
//!
//! The critical point is always `0` and the critical value is `a`. For
//! `0 < a <= 2^{1/(r-1)}` the map sends its core interval `[a - a^r, a]`
//! into itself; beyond that bound the critical orbit eventually escapes.

use crate::error::{Error, Result};

/// Relative slack accepted on the upper end of the self-map window, so the
/// boundary value typed with 17 digits is still inside.
const WINDOW_SLACK: f64 = 1e-12;

/// `|x|^r` with `0` mapped to `0`.
#[inline]
pub(crate) fn abs_pow(x: f64, r: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.abs().powf(r)
    }
}

/// Largest parameter for which `f_a` is a self-map of its core interval:
/// `a^{r-1} = 2`.
pub fn full_parameter(r: f64) -> f64 {
    2f64.powf(1.0 / (r - 1.0))
}

/// One member `f_a(x) = a - |x|^r` of the family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawMap {
    a: f64,
    r: f64,
}

impl PowerLawMap {
    /// Requires `r > 1` and `a > 0`. The self-map window is not checked here;
    /// see [`PowerLawMap::check_window`].
    pub fn new(a: f64, r: f64) -> Result<Self> {
        if !r.is_finite() || r <= 1.0 {
            return Err(Error::InvalidParameter(format!("exponent r = {r} must exceed 1")));
        }
        if !a.is_finite() || a <= 0.0 {
            return Err(Error::InvalidParameter(format!("parameter a = {a} must be positive")));
        }
        Ok(Self { a, r })
    }

    /// Like [`PowerLawMap::new`] but also rejects `a` above the self-map window.
    pub fn in_window(a: f64, r: f64) -> Result<Self> {
        let map = Self::new(a, r)?;
        map.check_window()?;
        Ok(map)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn full_parameter(&self) -> f64 {
        full_parameter(self.r)
    }

    pub fn is_self_map(&self) -> bool {
        self.a <= self.full_parameter() * (1.0 + WINDOW_SLACK)
    }

    pub fn check_window(&self) -> Result<()> {
        if self.is_self_map() {
            Ok(())
        } else {
            Err(Error::NotSelfMap { a: self.a, r: self.r, a_full: self.full_parameter() })
        }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        self.a - abs_pow(x, self.r)
    }

    /// `f'(x) = -r sgn(x) |x|^{r-1}`, zero at the critical point.
    #[inline]
    pub fn phase_derivative(&self, x: f64) -> f64 {
        if x == 0.0 {
            0.0
        } else {
            -self.r * x.signum() * x.abs().powf(self.r - 1.0)
        }
    }

    /// Orbits farther than this from the origin have left every candidate
    /// core interval and diverge.
    pub fn escape_bound(&self) -> f64 {
        4.0 * self.a.max(1.0) + 1.0
    }

    /// `(a - a^r, a)`. Fails with [`Error::NotSelfMap`] above the window.
    pub fn core_interval(&self) -> Result<(f64, f64)> {
        self.check_window()?;
        Ok((self.a - abs_pow(self.a, self.r), self.a))
    }

    /// The values `w_i = f^i(0)` for `i = 1..=n`, optionally with the
    /// parameter derivatives `D_i = d/da f^i(0)`.
    ///
    /// Inside the self-map window the exact orbit never leaves the core
    /// interval, so iterates that round past its lower end are clamped back.
    /// Without this the repelling boundary fixed point at `a = a_full` would
    /// let rounding push the orbit out.
    pub fn critical_orbit(&self, n: usize, with_derivs: bool) -> Result<OrbitBuffer> {
        if n == 0 {
            return Err(Error::InvalidParameter("orbit depth must be at least 1".into()));
        }
        let floor = if self.is_self_map() {
            Some(self.a - abs_pow(self.a, self.r))
        } else {
            None
        };
        let bound = self.escape_bound();
        let mut values = Vec::with_capacity(n);
        let mut derivs = with_derivs.then(|| Vec::with_capacity(n));

        let mut w = self.a;
        let mut d = 1.0;
        for step in 1..=n {
            if step > 1 {
                let prev = w;
                w = self.eval(prev);
                if let Some(lo) = floor {
                    w = w.max(lo);
                }
                d = 1.0 + self.phase_derivative(prev) * d;
            }
            if !w.is_finite() || w.abs() > bound {
                return Err(Error::OrbitEscaped { step, value: w, bound });
            }
            values.push(w);
            if let Some(ds) = derivs.as_mut() {
                ds.push(d);
            }
        }
        Ok(OrbitBuffer { values, param_derivs: derivs })
    }

    /// `f^n(0)`, without escape checks.
    pub fn critical_iterate(&self, n: usize) -> f64 {
        let mut w = 0.0;
        for _ in 0..n {
            w = self.eval(w);
        }
        w
    }

    /// Sign and log-magnitude of `prod_{j=1}^{n-1} f'(w_j)`, the derivative of
    /// `f^{n-1}` at the critical value.
    pub fn orbit_derivative_product(&self, n: usize) -> SignedLogProduct {
        let mut acc = SignedLogProduct::one();
        let mut w = self.a;
        for _ in 1..n {
            acc.mul(self.phase_derivative(w));
            if acc.is_zero() {
                break;
            }
            w = self.eval(w);
        }
        acc
    }
}

/// A prefix of the critical orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitBuffer {
    /// `w_1, ..., w_n`.
    pub values: Vec<f64>,
    /// `D_1, ..., D_n` with `D_1 = 1`, `D_{i+1} = 1 + f'(w_i) D_i`.
    pub param_derivs: Option<Vec<f64>>,
}

impl OrbitBuffer {
    pub fn depth(&self) -> usize {
        self.values.len()
    }

    /// `min_{i <= k} |w_i|` together with the (1-based) step where it occurs.
    pub fn closest_approach(&self, k: usize) -> (usize, f64) {
        self.values
            .iter()
            .take(k)
            .enumerate()
            .map(|(i, w)| (i + 1, w.abs()))
            .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
    }
}

/// A real number stored as `sign * exp(log_magnitude)`; used for long
/// derivative products that would overflow or underflow as raw doubles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLogProduct {
    pub sign: i8,
    pub log_magnitude: f64,
}

impl SignedLogProduct {
    pub fn one() -> Self {
        Self { sign: 1, log_magnitude: 0.0 }
    }

    pub fn zero() -> Self {
        Self { sign: 0, log_magnitude: f64::NEG_INFINITY }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn mul(&mut self, factor: f64) {
        if factor == 0.0 || self.is_zero() {
            *self = Self::zero();
        } else {
            if factor < 0.0 {
                self.sign = -self.sign;
            }
            self.log_magnitude += factor.abs().ln();
        }
    }

    /// The product as a plain double (may overflow to infinity).
    pub fn value(&self) -> f64 {
        f64::from(self.sign) * self.log_magnitude.exp()
    }

    /// `x / self`, computed without forming the product.
    pub fn divide(&self, x: f64) -> f64 {
        if self.is_zero() {
            return x / 0.0;
        }
        if x == 0.0 {
            return 0.0;
        }
        f64::from(self.sign) * x.signum() * (x.abs().ln() - self.log_magnitude).exp()
    }
}
