//! Spectral radius by power iteration on repeated squares, checked against a
//! dense eigenvalue solver.

use kneadlab::thurston::matrix_spectral_radius;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in [2, 5, 9, 14] {
        let m = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        let ours = matrix_spectral_radius(&m, 1e-12, 0);
        let dense = m.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max);
        println!("n = {n:>2}: rho = {ours:.12}, eigenvalues give {dense:.12}");
    }
}
