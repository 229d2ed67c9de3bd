//! Where kneading symbols change as `a` grows, and continuity of the
//! itinerary in `r` and of the entropy in `a`.

use kneadlab::sweep::{entropy_continuity_probe, locate_symbol_change, r_continuity_probe};

fn main() -> kneadlab::Result<()> {
    for (n, bracket) in [(2, (0.8, 1.2)), (3, (1.7, 1.8)), (4, (1.3, 1.32))] {
        match locate_symbol_change(2.0, n, bracket, 1e-15) {
            Ok(c) => println!(
                "e_{n} changes {} -> {} at a = {:.12} ({:?} prefix, signed order {})",
                c.before,
                c.after,
                c.a,
                c.parity,
                if c.matches_signed_order() { "respected" } else { "VIOLATED" }
            ),
            Err(e) => println!("e_{n} on {bracket:?}: {e}"),
        }
    }

    for (a, r) in [(1.6, 2.0), (1.5, 2.5), (1.0, 2.0)] {
        match r_continuity_probe(a, r, 10, 1e-6) {
            Ok(same) => println!("itinerary at a = {a} constant in r near {r}: {same}"),
            Err(e) => println!("a = {a}, r = {r}: {e}"),
        }
    }
    let jump = entropy_continuity_probe(2.0, 1.7549, 1e-3, 64, 64)?;
    println!("largest entropy jump on a 64-step grid around 1.7549: {jump:.2e}");
    Ok(())
}
