//! Transversality data along the critical orbit: the parameter derivative of
//! `f^n(0)` over the orbit multiplier equals `det(I - DT)` and the
//! telescoping sum, and at superstable parameters `det(I - DT) > 0` with
//! `DT` contracting.

use kneadlab::thurston::{determinant_identity_residual, positivity_check, superstable_census, telescoping_sum};

fn main() -> kneadlab::Result<()> {
    let r = 2.5;
    println!("generic parameters, r = {r}");
    for (a, n) in [(1.2, 6), (1.45, 4), (1.55, 9)] {
        let res = determinant_identity_residual(r, a, n)?;
        let tel = telescoping_sum(r, a, n)?;
        println!("  a = {a}, n = {n}: lhs {:.12} rhs {:.12} sum {tel:.12} rel {:.1e}", res.lhs, res.rhs, res.relative_residual);
    }

    println!("superstable parameters, r = {r}");
    for s in superstable_census(r, 6, 1e-15) {
        let p = positivity_check(r, s.a, s.period())?;
        println!("  {:<6} a = {:.12} det = {:.6} rho = {:.6} {}", s.word.to_string(), s.a, p.det, p.spectral_radius, if p.ok { "ok" } else { "FAIL" });
    }
    Ok(())
}
