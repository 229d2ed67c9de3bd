//! Superstable parameters by bisection in `a` and by Thurston iteration on
//! critical-orbit vectors; the two are independent and must agree.

use kneadlab::thurston::{superstable_census, thurston_fixed_point, CriticalOrbitVector, SignPattern, DEFAULT_MAX_ITER};

fn main() -> kneadlab::Result<()> {
    let r: f64 = std::env::args().nth(1).map_or(2.0, |s| s.parse().expect("numeric r"));
    println!("{:>8} {:>18} {:>18} {:>9} {:>6}", "word", "a (bisection)", "a (Thurston)", "diff", "iters");
    for s in superstable_census(r, 7, 1e-15) {
        let signs = SignPattern::from_word(&s.word)?;
        let fp = thurston_fixed_point(&signs, r, &CriticalOrbitVector::default_guess(&signs), 1e-13, DEFAULT_MAX_ITER)?;
        println!(
            "{:>8} {:>18.14} {:>18.14} {:>9.1e} {:>6}",
            s.word.to_string(),
            s.a,
            fp.parameter(),
            (s.a - fp.parameter()).abs(),
            fp.iterations
        );
    }
    Ok(())
}
