//! Error type shared by every module of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("a = {a} lies outside the self-map window (0, {a_full}] for r = {r}")]
    NotSelfMap { a: f64, r: f64, a_full: f64 },

    #[error("critical orbit escaped at step {step} (w = {value:e}, escape bound {bound})")]
    OrbitEscaped { step: usize, value: f64, bound: f64 },

    #[error("preimage tree exceeded the node budget of {budget} at depth {depth}")]
    DepthTooLarge { depth: usize, budget: usize },

    #[error("invalid kneading word: {0}")]
    InvalidWord(String),

    #[error("root argument z_1 - z_{index} = {value:e} is not positive")]
    BranchDomain { index: usize, value: f64 },

    #[error("branch domain left at iteration {iteration}: {source}")]
    BranchDomainDuringIteration {
        iteration: usize,
        iterate: Vec<f64>,
        #[source]
        source: Box<Error>,
    },

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("no sign change of f^{n}(0) on [{lo}, {hi}]")]
    NoBracket { n: usize, lo: f64, hi: f64 },

    #[error("itinerary prefixes do not match on [{lo}, {hi}]: {detail}")]
    PrefixMismatch { lo: f64, hi: f64, detail: String },

    #[error("critical orbit passes within {min_abs:e} of the critical point (step {step})")]
    NearCriticalOrbit { step: usize, min_abs: f64 },

    #[error("a = {a} is not superstable of period {n}: {detail}")]
    NotSuperstable { a: f64, n: usize, detail: String },
}
