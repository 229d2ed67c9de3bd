//! Superstable parameters by bisection in `a`.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kneading::{compare_symbols, itinerary, KneadingWord, Symbol};
use crate::map::{full_parameter, PowerLawMap};

/// Iteration cap for both bisection loops; 200 halvings exhaust any double
/// bracket.
const MAX_HALVINGS: usize = 200;

/// A parameter where the critical point is periodic of exact period `word.len()`.
#[derive(Debug, Clone, PartialEq)]
pub struct Superstable {
    pub a: f64,
    pub word: KneadingWord,
}

impl Superstable {
    pub fn period(&self) -> usize {
        self.word.len()
    }
}

fn superstable_length(word: &KneadingWord) -> Result<usize> {
    if !word.terminated_at_c() {
        return Err(Error::InvalidWord(format!("{word} does not end in C")));
    }
    if word.len() < 2 {
        return Err(Error::InvalidWord("a superstable word needs at least one symbol before C".into()));
    }
    Ok(word.len())
}

fn prefix_at(a: f64, r: f64, k: usize) -> Result<KneadingWord> {
    itinerary(&PowerLawMap::new(a, r)?, k, 0.0)
}

/// Solves `f_a^n(0) = 0` on a bracket whose endpoints share the word's
/// `C`-free prefix. Bisection runs until `|f^n(0)| <= tol` or the bracket
/// is exhausted at double precision; for long words the second happens
/// first and the residual is `|d/da f^n(0)|` times one ulp.
pub fn bisect_superstable(r: f64, word: &KneadingWord, bracket: (f64, f64), tol: f64) -> Result<f64> {
    let n = superstable_length(word)?;
    let (mut lo, mut hi) = if bracket.0 <= bracket.1 { bracket } else { (bracket.1, bracket.0) };
    let g = |a: f64| -> Result<f64> { Ok(PowerLawMap::new(a, r)?.critical_iterate(n)) };

    let (g_lo, g_hi) = (g(lo)?, g(hi)?);
    if g_lo.signum() == g_hi.signum() && g_lo != 0.0 && g_hi != 0.0 {
        return Err(Error::NoBracket { n, lo, hi });
    }
    let prefix = word.free_prefix();
    for end in [lo, hi] {
        let got = prefix_at(end, r, n - 1)?;
        if got.symbols() != prefix {
            return Err(Error::PrefixMismatch {
                lo,
                hi,
                detail: format!("itinerary at a = {end} is {got}, word prefix is {}", KneadingWord::new(prefix.to_vec())?),
            });
        }
    }

    let lo_positive = g_lo > 0.0;
    let mut best = if g_lo.abs() <= g_hi.abs() { (lo, g_lo.abs()) } else { (hi, g_hi.abs()) };
    for _ in 0..MAX_HALVINGS {
        if best.1 <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid)?;
        if gm.abs() < best.1 {
            best = (mid, gm.abs());
        }
        if gm == 0.0 {
            break;
        }
        if (gm > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(best.0)
}

/// A bracket around the superstable parameter of `word`, found by bisecting
/// in the signed lexicographic order of itineraries: the itinerary is
/// monotone in `a`, so it is compared against the target word and the half
/// that must contain it is kept. Stops once both endpoints carry the word's
/// prefix. For an inadmissible word the bracket collapses without that
/// happening and the returned endpoints disagree with the prefix.
pub fn superstable_bracket(r: f64, word: &KneadingWord) -> Result<(f64, f64)> {
    let n = superstable_length(word)?;
    let cmp = |a: f64| -> Result<(Ordering, KneadingWord)> {
        let itin = prefix_at(a, r, n)?;
        Ok((compare_symbols(itin.symbols(), word.symbols()), itin))
    };
    let prefix = word.free_prefix();
    let has_prefix = |w: &KneadingWord| w.len() >= n - 1 && &w.symbols()[..n - 1] == prefix;

    let mut hi = full_parameter(r);
    let mut lo = hi * 1e-9;
    let (c_lo, mut w_lo) = cmp(lo)?;
    let (c_hi, mut w_hi) = cmp(hi)?;
    if c_lo != Ordering::Less || c_hi != Ordering::Greater {
        return Err(Error::NoBracket { n, lo, hi });
    }
    for _ in 0..MAX_HALVINGS {
        if has_prefix(&w_lo) && has_prefix(&w_hi) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (c, w) = cmp(mid)?;
        match c {
            Ordering::Less => {
                lo = mid;
                w_lo = w;
            }
            Ordering::Greater => {
                hi = mid;
                w_hi = w;
            }
            Ordering::Equal => return Ok((mid, mid)),
        }
    }
    Ok((lo, hi))
}

/// Superstable parameter of `word` for exponent `r`, or an error when the
/// word is not realized in the family.
pub fn find_superstable(r: f64, word: &KneadingWord, tol: f64) -> Result<f64> {
    let bracket = superstable_bracket(r, word)?;
    if bracket.0 == bracket.1 {
        return Ok(bracket.0);
    }
    bisect_superstable(r, word, bracket, tol)
}

/// Every word `R e_2 ... e_{n-1} C` of length `n`, in binary order of the
/// interior symbols.
pub fn candidate_words(n: usize) -> Vec<KneadingWord> {
    if n < 2 {
        return Vec::new();
    }
    let free = n - 2;
    (0..1u64 << free)
        .map(|bits| {
            let mut symbols = Vec::with_capacity(n);
            symbols.push(Symbol::R);
            symbols.extend((0..free).map(|i| if bits >> (free - 1 - i) & 1 == 1 { Symbol::R } else { Symbol::L }));
            symbols.push(Symbol::C);
            KneadingWord::new(symbols).expect("C only at the end")
        })
        .collect()
}

/// All superstable parameters of period `2..=max_period`, sorted by period
/// and then by `a`. Words the family does not realize are skipped.
pub fn superstable_census(r: f64, max_period: usize, tol: f64) -> Vec<Superstable> {
    let mut found: Vec<Superstable> = (2..=max_period)
        .flat_map(candidate_words)
        .collect::<Vec<_>>()
        .into_par_iter()
        .filter_map(|word| find_superstable(r, &word, tol).ok().map(|a| Superstable { a, word }))
        .collect();
    found.sort_by(|x, y| x.period().cmp(&y.period()).then(x.a.total_cmp(&y.a)));
    found
}
