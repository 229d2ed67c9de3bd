//! Lap numbers of iterates from the tree of critical preimages.

use kneadlab::kneading::{critical_preimages, lap_count};
use kneadlab::PowerLawMap;

fn main() -> kneadlab::Result<()> {
    let full = PowerLawMap::new(2.0, 2.0)?;
    println!("preimages of 0 at a = 2: {:?}", critical_preimages(&full, 0.0));

    for (label, a) in [("period-2 superstable", 1.0), ("period-3 superstable", 1.754_877_666_246_693), ("full", 2.0)] {
        let map = PowerLawMap::new(a, 2.0)?;
        let laps: Vec<u64> = (1..=14).map(|n| lap_count(&map, n)).collect::<kneadlab::Result<_>>()?;
        println!("{label:<22} {laps:?}");
    }
    Ok(())
}
