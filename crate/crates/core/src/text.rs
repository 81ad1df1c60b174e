//! Texts, substrings and the per-repeat / per-text records shared by every
//! other module.
//!
//! Positions are 1-based throughout the public API: a [`Substring`] with
//! `start = 1` begins at the first symbol of the text.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

/// One text symbol.
///
/// Texts read from files are bytes, so every byte maps to the symbol of the
/// same value. The type is wider than a byte so that generated families with
/// more than 256 letters stay representable in memory.
pub type Symbol = u16;

/// Exact rational used for ratios, bounds and slack.
pub type Rational = Ratio<i128>;

/// An immutable, non-empty sequence of symbols.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Text {
    symbols: Box<[Symbol]>,
}

impl Text {
    pub fn from_symbols(symbols: impl Into<Vec<Symbol>>) -> Result<Self> {
        let symbols = symbols.into();
        if symbols.is_empty() {
            return Err(CoreError::EmptyText);
        }
        Ok(Text {
            symbols: symbols.into_boxed_slice(),
        })
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        Self::from_symbols(bytes.iter().map(|&b| Symbol::from(b)).collect::<Vec<_>>())
    }

    /// The text as raw bytes, or `None` when some symbol does not fit a byte.
    pub fn to_bytes(&self) -> Option<Vec<u8>> {
        self.symbols.iter().map(|&s| u8::try_from(s).ok()).collect()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    /// Always false; kept for API symmetry with slices.
    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    /// Symbol at 1-based position `pos`.
    #[inline]
    pub fn at(&self, pos: usize) -> Symbol {
        self.symbols[pos - 1]
    }

    pub fn substring(&self, start: usize, len: usize) -> Result<Substring> {
        if len == 0 {
            return Ok(Substring::EMPTY);
        }
        if start == 0 || start + len - 1 > self.len() {
            return Err(CoreError::SubstringOutOfRange {
                start,
                len,
                n: self.len(),
            });
        }
        Ok(Substring { start, len })
    }

    pub fn slice(&self, s: Substring) -> &[Symbol] {
        if s.len == 0 {
            return &[];
        }
        &self.symbols[s.start - 1..s.start - 1 + s.len]
    }

    pub fn reversed(&self) -> Text {
        let mut symbols = self.symbols.to_vec();
        symbols.reverse();
        Text {
            symbols: symbols.into_boxed_slice(),
        }
    }

    /// Sorted distinct symbols of the text.
    pub fn alphabet(&self) -> Vec<Symbol> {
        let mut seen = vec![false; usize::from(Symbol::MAX) + 1];
        for &s in self.symbols.iter() {
            seen[usize::from(s)] = true;
        }
        seen.iter()
            .enumerate()
            .filter(|(_, &present)| present)
            .map(|(s, _)| s as Symbol)
            .collect()
    }

    /// Alphabet size σ.
    pub fn sigma(&self) -> usize {
        self.alphabet().len()
    }

    pub fn count_symbol(&self, symbol: Symbol) -> usize {
        self.symbols.iter().filter(|&&s| s == symbol).count()
    }

    /// True if the last symbol occurs nowhere else.
    pub fn has_terminator(&self) -> bool {
        let last = self.symbols[self.len() - 1];
        !self.symbols[..self.len() - 1].contains(&last)
    }

    /// Appends a terminator. With `None` the smallest byte value absent from
    /// the text is used.
    pub fn with_terminator(&self, terminator: Option<Symbol>) -> Result<Text> {
        let term = match terminator {
            Some(t) if self.symbols.contains(&t) => return Err(CoreError::TerminatorInUse(t)),
            Some(t) => t,
            None => {
                let alphabet = self.alphabet();
                (0..=Symbol::from(u8::MAX))
                    .find(|s| alphabet.binary_search(s).is_err())
                    .ok_or(CoreError::NoFreeTerminator)?
            }
        };
        let mut symbols = self.symbols.to_vec();
        symbols.push(term);
        Text::from_symbols(symbols)
    }

    /// All 1-based starting positions of `pattern`, in increasing order.
    ///
    /// The empty pattern is reported at positions `1..=n`.
    pub fn find_all(&self, pattern: &[Symbol]) -> Vec<usize> {
        if pattern.is_empty() {
            return (1..=self.len()).collect();
        }
        if pattern.len() > self.len() {
            return Vec::new();
        }
        self.symbols
            .windows(pattern.len())
            .enumerate()
            .filter(|(_, w)| *w == pattern)
            .map(|(i, _)| i + 1)
            .collect()
    }
}

impl fmt::Debug for Text {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Text(\"{}\")", escape_symbols(&self.symbols))
    }
}

impl fmt::Display for Text {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&escape_symbols(&self.symbols))
    }
}

/// Renders symbols as printable ASCII, escaping other bytes as `\xNN` and
/// symbols above a byte as `\x{NNNN}`.
pub fn escape_symbols(symbols: &[Symbol]) -> String {
    let mut out = String::with_capacity(symbols.len());
    for &s in symbols {
        match u8::try_from(s) {
            Ok(b'\\') => out.push_str("\\\\"),
            Ok(b) if b.is_ascii_graphic() || b == b' ' => out.push(char::from(b)),
            Ok(b) => out.push_str(&format!("\\x{b:02x}")),
            Err(_) => out.push_str(&format!("\\x{{{s:04x}}}")),
        }
    }
    out
}

/// Sorted distinct symbols of a text. See [`Text::alphabet`].
pub fn alphabet(t: &Text) -> Vec<Symbol> {
    t.alphabet()
}

/// Occurrence positions of `s` in `t`, 1-based and strictly increasing.
pub fn occurrences(t: &Text, s: Substring) -> Vec<usize> {
    t.find_all(t.slice(s))
}

/// A substring descriptor `(start, len)` with a 1-based start.
///
/// The empty string ε is canonically `(1, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Substring {
    pub start: usize,
    pub len: usize,
}

impl Substring {
    pub const EMPTY: Substring = Substring { start: 1, len: 0 };

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

/// One repeat together with its occurrences and extension sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepeatRecord {
    pub repeat: Substring,
    pub occurrences: Vec<usize>,
    pub left_ext: BTreeSet<Symbol>,
    pub right_ext: BTreeSet<Symbol>,
    pub is_prefix: bool,
    pub is_suffix: bool,
}

impl RepeatRecord {
    /// Builds the record for `repeat` from its (sorted) occurrence list.
    ///
    /// For ε the occurrence list is `1..=n`, which makes both extension sets
    /// equal to the alphabet.
    pub fn from_occurrences(t: &Text, repeat: Substring, occurrences: Vec<usize>) -> Self {
        let n = t.len();
        let len = repeat.len;
        if len == 0 {
            let alphabet: BTreeSet<Symbol> = t.alphabet().into_iter().collect();
            return RepeatRecord {
                repeat: Substring::EMPTY,
                occurrences,
                left_ext: alphabet.clone(),
                right_ext: alphabet,
                is_prefix: true,
                is_suffix: true,
            };
        }
        let left_ext = occurrences
            .iter()
            .filter(|&&i| i > 1)
            .map(|&i| t.at(i - 1))
            .collect();
        let right_ext = occurrences
            .iter()
            .filter(|&&i| i + len <= n)
            .map(|&i| t.at(i + len))
            .collect();
        let is_prefix = occurrences.first() == Some(&1);
        let is_suffix = occurrences.binary_search(&(n + 1 - len)).is_ok();
        RepeatRecord {
            repeat,
            occurrences,
            left_ext,
            right_ext,
            is_prefix,
            is_suffix,
        }
    }

    /// The prefix/suffix characterization of maximality.
    pub fn is_maximal(&self) -> bool {
        if self.repeat.is_empty() {
            return true;
        }
        self.occurrences.len() >= 2
            && (self.is_prefix || self.left_ext.len() >= 2)
            && (self.is_suffix || self.right_ext.len() >= 2)
    }

    /// Number of right extensions, r_S.
    pub fn right_count(&self) -> usize {
        self.right_ext.len()
    }

    /// Number of left extensions, ℓ_S.
    pub fn left_count(&self) -> usize {
        self.left_ext.len()
    }
}

/// Repetitiveness measures of one text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub n: u64,
    pub sigma: u64,
    pub mr: u64,
    pub er: u64,
    pub el: u64,
    #[serde(with = "rational_str")]
    pub ratio: Rational,
}

impl MeasureReport {
    pub fn new(n: u64, sigma: u64, mr: u64, er: u64, el: u64) -> Self {
        MeasureReport {
            n,
            sigma,
            mr,
            er,
            el,
            ratio: Rational::new(i128::from(el), i128::from(er.max(1))),
        }
    }

    /// Sums the extension counts of a set of maximal repeats (ε included).
    pub fn from_records(t: &Text, records: &[RepeatRecord]) -> Self {
        let er = records.iter().map(|r| r.right_count() as u64).sum();
        let el = records.iter().map(|r| r.left_count() as u64).sum();
        MeasureReport::new(
            t.len() as u64,
            t.sigma() as u64,
            records.len() as u64,
            er,
            el,
        )
    }
}

/// Serializes a rational as `"num/den"` (or `"num"` when integral).
pub mod rational_str {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}
