use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::PowerLawMap;

/// Position of a point relative to the critical point `0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Symbol {
    L,
    C,
    R,
}

impl Symbol {
    pub fn classify(w: f64, c_tol: f64) -> Self {
        if w < -c_tol {
            Symbol::L
        } else if w > c_tol {
            Symbol::R
        } else {
            Symbol::C
        }
    }

    /// Branch orientation of `f` at a point with this symbol: `+1` on the
    /// increasing branch, `-1` on the decreasing one, `0` at the critical point.
    pub fn orientation(self) -> i8 {
        match self {
            Symbol::L => 1,
            Symbol::C => 0,
            Symbol::R => -1,
        }
    }

    /// For this family `f' < 0` exactly on the `R` side.
    pub fn is_reversing(self) -> bool {
        self == Symbol::R
    }

    pub fn as_char(self) -> char {
        match self {
            Symbol::L => 'L',
            Symbol::C => 'C',
            Symbol::R => 'R',
        }
    }

    /// Rank under `L < C < R` (even parity) or `R < C < L` (odd parity).
    fn rank(self, odd: bool) -> u8 {
        let r = match self {
            Symbol::L => 0,
            Symbol::C => 1,
            Symbol::R => 2,
        };
        if odd {
            2 - r
        } else {
            r
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl TryFrom<char> for Symbol {
    type Error = Error;

    fn try_from(c: char) -> Result<Self> {
        match c.to_ascii_uppercase() {
            'L' => Ok(Symbol::L),
            'C' => Ok(Symbol::C),
            'R' => Ok(Symbol::R),
            other => Err(Error::InvalidWord(format!("unknown symbol {other:?}"))),
        }
    }
}

/// A finite itinerary of the critical value. A `C`, if present, is always
/// the last symbol: the orbit is periodic from there on and nothing further
/// is recorded.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KneadingWord {
    symbols: Vec<Symbol>,
}

impl KneadingWord {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::InvalidWord("empty word".into()));
        }
        if let Some(pos) = symbols[..symbols.len() - 1].iter().position(|&s| s == Symbol::C) {
            return Err(Error::InvalidWord(format!(
                "C may only appear as the last symbol (found at position {})",
                pos + 1
            )));
        }
        Ok(Self { symbols })
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn terminated_at_c(&self) -> bool {
        self.symbols.last() == Some(&Symbol::C)
    }

    /// The symbols before the terminating `C` (the whole word if there is none).
    pub fn free_prefix(&self) -> &[Symbol] {
        if self.terminated_at_c() {
            &self.symbols[..self.symbols.len() - 1]
        } else {
            &self.symbols
        }
    }

    /// Number of `R` symbols among the first `k`.
    pub fn reversing_count(&self, k: usize) -> usize {
        self.symbols.iter().take(k).filter(|s| s.is_reversing()).count()
    }
}

impl fmt::Display for KneadingWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.symbols {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for KneadingWord {
    type Err = Error;

    /// Parses strings such as `"RLC"` or `"R L C"`.
    fn from_str(s: &str) -> Result<Self> {
        let symbols = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(Symbol::try_from)
            .collect::<Result<Vec<_>>>()?;
        Self::new(symbols)
    }
}

/// Itinerary `e_1 ... e_n` of the critical value, cut at the first `C`.
pub fn itinerary(map: &PowerLawMap, n: usize, c_tol: f64) -> Result<KneadingWord> {
    let orbit = map.critical_orbit(n, false)?;
    Ok(word_from_values(&orbit.values, c_tol))
}

pub(crate) fn word_from_values(values: &[f64], c_tol: f64) -> KneadingWord {
    let mut symbols = Vec::with_capacity(values.len());
    for &w in values {
        let s = Symbol::classify(w, c_tol);
        symbols.push(s);
        if s == Symbol::C {
            break;
        }
    }
    KneadingWord { symbols }
}

/// Signed lexicographic order on symbol strings.
///
/// At the first index where the strings differ, `L < C < R` if the common
/// prefix holds an even number of `R`s and `R < C < L` if odd. Strings that
/// agree on their common length compare `Equal`.
pub fn compare_symbols(u: &[Symbol], v: &[Symbol]) -> Ordering {
    let mut odd = false;
    for (&x, &y) in u.iter().zip(v) {
        if x != y {
            return x.rank(odd).cmp(&y.rank(odd));
        }
        if x.is_reversing() {
            odd = !odd;
        }
    }
    Ordering::Equal
}

pub fn signed_lex_compare(u: &KneadingWord, v: &KneadingWord) -> Ordering {
    compare_symbols(&u.symbols, &v.symbols)
}
