//! Brute-force ground truth.
//!
//! Everything here works by enumerating substrings and counting occurrences
//! directly. It shares no code with the suffix index beyond the basic
//! [`Text`] accessors, which is what makes it useful as a cross-check.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::cdawg::{Cdawg, CdawgEdge};
use crate::error::{CoreError, Result};
use crate::text::{escape_symbols, MeasureReport, RepeatRecord, Substring, Symbol, Text};

/// Default largest text length the oracle accepts.
pub const DEFAULT_CAP: usize = 2000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    /// One record per distinct maximal repeat, ε first, then by (length, position).
    pub repeats: Vec<RepeatRecord>,
    pub report: MeasureReport,
}

impl OracleResult {
    /// The repeats as symbol strings.
    pub fn repeat_strings(&self, t: &Text) -> BTreeSet<Vec<Symbol>> {
        self.repeats.iter().map(|r| t.slice(r.repeat).to_vec()).collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Oracle {
    cap: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle { cap: DEFAULT_CAP }
    }
}

/// Every substring of length `len`, keyed by content, with its start positions.
type LengthTable<'t> = HashMap<&'t [Symbol], Vec<usize>>;

impl Oracle {
    pub fn with_cap(cap: usize) -> Self {
        Oracle { cap }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    fn check_cap(&self, t: &Text) -> Result<()> {
        if t.len() > self.cap {
            return Err(CoreError::SizeCapExceeded {
                n: t.len(),
                cap: self.cap,
            });
        }
        Ok(())
    }

    /// Enumerates M(T) by grouping all substrings of each length.
    ///
    /// Every repeated substring is classified twice, once by the
    /// prefix/suffix characterization and once by the strict occurrence-count
    /// definition; any disagreement is returned as an error.
    pub fn enumerate_maximal_repeats(&self, t: &Text) -> Result<OracleResult> {
        self.check_cap(t)?;
        let n = t.len();
        let symbols = t.symbols();
        let alphabet = t.alphabet();

        // tables[len] for len in 1..=n+1; the last one is empty and only
        // serves lookups of one-symbol extensions of the whole text.
        let mut tables: Vec<LengthTable<'_>> = Vec::with_capacity(n + 2);
        tables.push(HashMap::new());
        for len in 1..=n + 1 {
            let mut table: LengthTable<'_> = HashMap::new();
            if len <= n {
                for (i, window) in symbols.windows(len).enumerate() {
                    table.entry(window).or_default().push(i + 1);
                }
            }
            tables.push(table);
        }

        let mut repeats = vec![RepeatRecord::from_occurrences(
            t,
            Substring::EMPTY,
            (1..=n).collect(),
        )];
        let mut key = Vec::with_capacity(n + 1);
        for len in 1..=n {
            let mut found: Vec<RepeatRecord> = Vec::new();
            for (s, occ) in &tables[len] {
                if occ.len() < 2 {
                    continue;
                }
                let record = RepeatRecord::from_occurrences(
                    t,
                    Substring {
                        start: occ[0],
                        len,
                    },
                    occ.clone(),
                );
                let characterized = record.is_maximal();

                let count = occ.len();
                let strict = alphabet.iter().all(|&a| {
                    key.clear();
                    key.push(a);
                    key.extend_from_slice(s);
                    let left = tables[len + 1].get(key.as_slice()).map_or(0, Vec::len);
                    key.clear();
                    key.extend_from_slice(s);
                    key.push(a);
                    let right = tables[len + 1].get(key.as_slice()).map_or(0, Vec::len);
                    left < count && right < count
                });

                if strict != characterized {
                    return Err(CoreError::DefinitionMismatch {
                        repeat: escape_symbols(s),
                        strict,
                        characterized,
                    });
                }
                if characterized {
                    found.push(record);
                }
            }
            found.sort_by_key(|r| r.repeat.start);
            repeats.extend(found);
        }

        let report = MeasureReport::from_records(t, &repeats);
        Ok(OracleResult { repeats, report })
    }

    /// Builds the CDAWG of a terminator-ended text from end-position classes.
    ///
    /// Nodes are the classes whose longest member is a maximal repeat, plus
    /// the sink (strings ending only at the last position). Each edge starts
    /// with a right extension of its source node and is extended one symbol
    /// at a time until it lands in a node class.
    pub fn build_reference_cdawg(&self, t: &Text) -> Result<Cdawg> {
        self.check_cap(t)?;
        require_terminator(t)?;
        let n = t.len();
        let maximal = self.enumerate_maximal_repeats(t)?;

        // Map end-position sets to node ids. Source is 0, sink is last.
        let mut node_repeats: Vec<Substring> = maximal.repeats.iter().map(|r| r.repeat).collect();
        let mut node_of: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for (id, r) in maximal.repeats.iter().enumerate().skip(1) {
            node_of.insert(end_positions(t, t.slice(r.repeat)), id);
        }
        let sink = node_repeats.len();
        node_repeats.push(Substring { start: 1, len: n });
        node_of.insert(vec![n], sink);

        let mut edges = Vec::new();
        for (from, record) in maximal.repeats.iter().enumerate() {
            let base = t.slice(record.repeat).to_vec();
            for &a in &record.right_ext {
                let mut spelled = base.clone();
                spelled.push(a);
                let to = loop {
                    let ends = end_positions(t, &spelled);
                    if let Some(&node) = node_of.get(&ends) {
                        break node;
                    }
                    if let [end] = ends[..] {
                        // Unique occurrence: only the sink class can follow.
                        spelled.extend_from_slice(&t.symbols()[end..]);
                        continue;
                    }
                    // Not a node class: every occurrence continues the same way.
                    let next = ends[0] + 1;
                    if next > n {
                        return Err(CoreError::CdawgInvariant(format!(
                            "string {} ends the text but is not in the sink class",
                            escape_symbols(&spelled)
                        )));
                    }
                    spelled.push(t.at(next));
                };
                let last_end = end_positions(t, &spelled)[0];
                let label_len = spelled.len() - base.len();
                edges.push(CdawgEdge {
                    from,
                    label: Substring {
                        start: last_end + 1 - label_len,
                        len: label_len,
                    },
                    to,
                });
            }
        }

        Ok(Cdawg::from_parts(t, node_repeats, edges))
    }
}

pub(crate) fn require_terminator(t: &Text) -> Result<()> {
    if !t.has_terminator() {
        let last = t.at(t.len());
        return Err(CoreError::MissingTerminator {
            last,
            count: t.count_symbol(last),
        });
    }
    Ok(())
}

/// 1-based end positions of every occurrence of `pattern`.
fn end_positions(t: &Text, pattern: &[Symbol]) -> Vec<usize> {
    t.find_all(pattern)
        .into_iter()
        .map(|i| i + pattern.len() - 1)
        .collect()
}

/// Naive occurrence count of an arbitrary pattern.
fn count_occurrences(t: &Text, pattern: &[Symbol]) -> usize {
    let s = t.symbols();
    if pattern.len() > s.len() {
        return 0;
    }
    (0..=s.len() - pattern.len())
        .filter(|&i| &s[i..i + pattern.len()] == pattern)
        .count()
}

/// Maximality by the strict occurrence-count definition: `s` occurs at least
/// twice and, for every letter `a`, both `aS` and `Sa` occur strictly fewer
/// times than `S`. The empty string is always maximal.
pub fn is_maximal_repeat(t: &Text, s: Substring) -> bool {
    if s.is_empty() {
        return true;
    }
    let pattern = t.slice(s);
    let count = count_occurrences(t, pattern);
    if count < 2 {
        return false;
    }
    let mut probe = Vec::with_capacity(pattern.len() + 1);
    t.alphabet().into_iter().all(|a| {
        probe.clear();
        probe.push(a);
        probe.extend_from_slice(pattern);
        let left = count_occurrences(t, &probe);
        probe.remove(0);
        probe.push(a);
        let right = count_occurrences(t, &probe);
        left < count && right < count
    })
}

/// Convenience wrapper using the default cap.
pub fn enumerate_maximal_repeats(t: &Text) -> Result<OracleResult> {
    Oracle::default().enumerate_maximal_repeats(t)
}

/// Convenience wrapper using the default cap.
pub fn build_reference_cdawg(t: &Text) -> Result<Cdawg> {
    Oracle::default().build_reference_cdawg(t)
}
