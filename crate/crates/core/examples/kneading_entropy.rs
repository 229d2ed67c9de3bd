//! Entropy from the smallest zero of the kneading determinant, compared
//! with the growth rate of lap numbers.

use kneadlab::kneading::{entropy_from_kneading, entropy_from_laps, itinerary, kneading_coefficients, smallest_positive_root};
use kneadlab::PowerLawMap;

fn main() -> kneadlab::Result<()> {
    let r = 2.0;
    println!("{:>6} {:>10} {:>9} {:>10} {:>9}", "a", "h_kneading", "+/-", "h_laps", "+/-");
    for a in [1.0, 1.3, 1.45, 1.5, 1.6, 1.7549, 1.85, 2.0] {
        let map = PowerLawMap::new(a, r)?;
        let hk = entropy_from_kneading(&map, 64, 1e-13)?;
        let hl = entropy_from_laps(&map, 18)?;
        println!("{a:>6} {:>10.6} {:>9.1e} {:>10.6} {:>9.1e}", hk.value, hk.error_bound, hl.value, hl.error_bound);
    }

    let word = itinerary(&PowerLawMap::new(1.6, r)?, 64, 0.0)?;
    let series = kneading_coefficients(&word);
    let root = smallest_positive_root(&series, 1e-14)?;
    let head: Vec<String> = series.coefficients()[..12].iter().map(|c| format!("{c:+}")).collect();
    println!("a = 1.6: D(t) = 1 {} ...", head.iter().enumerate().map(|(i, c)| format!("{c} t^{}", i + 1)).collect::<Vec<_>>().join(" "));
    println!("t0 = {:.12} in [{:.6}, {:.6}], h = {:.12}", root.t0, root.enclosure.0, root.enclosure.1, -root.t0.ln());
    Ok(())
}
