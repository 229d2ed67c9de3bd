//! Symbolic dynamics of the critical orbit: itineraries, the signed
//! lexicographic order, the kneading determinant and the two entropy
//! estimators (smallest root of `D(t)` and lap-number growth).

mod laps;
mod series;
mod word;

pub use laps::{
    critical_preimages, entropy_from_laps, lap_count, lap_count_with_budget, DEFAULT_NODE_BUDGET,
};
pub use series::{
    entropy_from_kneading, entropy_from_kneading_with_ctol, entropy_from_word,
    kneading_coefficients, smallest_positive_root, EntropyEstimate, EntropyMethod, KneadingRoot,
    KneadingSeries,
};
pub use word::{compare_symbols, itinerary, signed_lex_compare, KneadingWord, Symbol};

pub(crate) use word::word_from_values;
