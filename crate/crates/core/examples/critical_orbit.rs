//! Critical orbit, parameter derivatives and the core interval of one map.
//!
//! cargo run --example critical_orbit -- 1.8 2.0

use kneadlab::PowerLawMap;

fn main() -> kneadlab::Result<()> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<f64>().expect("numeric argument"));
    let a = args.next().unwrap_or(1.8);
    let r = args.next().unwrap_or(2.0);

    let map = PowerLawMap::in_window(a, r)?;
    let (lo, hi) = map.core_interval()?;
    println!("f(x) = {a} - |x|^{r}, window (0, {:.6}], core interval [{lo:.6}, {hi:.6}]", map.full_parameter());

    let orbit = map.critical_orbit(12, true)?;
    let derivs = orbit.param_derivs.as_ref().unwrap();
    println!("{:>3} {:>22} {:>22}", "i", "w_i", "d w_i / da");
    for (i, (w, d)) in orbit.values.iter().zip(derivs).enumerate() {
        println!("{:>3} {w:>22.15} {d:>22.6}", i + 1);
    }
    let (step, min_abs) = orbit.closest_approach(12);
    println!("closest approach to 0: |w_{step}| = {min_abs:.3e}");

    match PowerLawMap::new(a + 1.0, r).and_then(|m| m.critical_orbit(40, false)) {
        Err(e) => println!("outside the window at a = {}: {e}", a + 1.0),
        Ok(_) => println!("a = {} stays bounded for 40 steps", a + 1.0),
    }
    Ok(())
}
