//! Kneading theory for the power-law unimodal family `f_a(x) = a - |x|^r`.
//!
//! * [`map`]: evaluation, critical orbits and parameter derivatives.
//! * [`kneading`]: itineraries, the signed lexicographic order, kneading
//!   determinants and topological entropy.
//! * [`thurston`]: the Thurston map on critical-orbit vectors, its fixed
//!   points, and the determinant identity linking `d/da f^n(0)` to
//!   `det(I - DT)`.
//! * [`sweep`]: parameter sweeps, monotonicity audits and continuity probes.
//! * [`cli`]: the `kneadlab` command line (entropy, superstable, sweep, verify).

pub mod cli;
pub mod error;
pub mod kneading;
pub mod map;
pub mod sweep;
pub mod thurston;

pub use error::{Error, Result};
pub use kneading::{EntropyEstimate, KneadingSeries, KneadingWord, Symbol};
pub use map::{full_parameter, OrbitBuffer, PowerLawMap, SignedLogProduct};
