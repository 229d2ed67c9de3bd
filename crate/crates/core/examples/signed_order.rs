//! Itineraries of the critical orbit and their signed lexicographic order,
//! which is monotone in the parameter.

use kneadlab::kneading::{itinerary, signed_lex_compare};
use kneadlab::{KneadingWord, PowerLawMap};

fn main() -> kneadlab::Result<()> {
    let r = 2.0;
    let mut previous: Option<KneadingWord> = None;
    for a in [0.8, 1.2, 1.3, 1.38, 1.5, 1.7, 1.76, 1.9, 2.0] {
        let word = itinerary(&PowerLawMap::new(a, r)?, 16, 0.0)?;
        let cmp = previous.as_ref().map(|p| format!("{:?}", signed_lex_compare(p, &word))).unwrap_or_default();
        println!("a = {a:<5} {word}  {cmp}");
        previous = Some(word);
    }

    for (u, v) in [("RL", "RL"), ("RR", "RL"), ("LR", "RL"), ("RLC", "RLL")] {
        let (u, v): (KneadingWord, KneadingWord) = (u.parse()?, v.parse()?);
        println!("{u} vs {v}: {:?}", signed_lex_compare(&u, &v));
    }
    Ok(())
}
