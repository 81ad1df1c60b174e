//! Suffix array + LCP interval tree engine for maximal repeats.
//!
//! Every LCP interval `[lo, hi]` of depth `d > 0` is the set of suffixes that
//! share a right-maximal repeat of length `d`. Its child intervals (and leaves)
//! correspond to the distinct symbols following the repeat, and the distinct
//! symbols preceding the suffixes in the interval are its left extensions.
//! Distinct preceding symbols are counted with a Fenwick tree over ranks,
//! answered in the order the bottom-up traversal closes intervals.

pub mod sais;

use crate::text::{MeasureReport, RepeatRecord, Substring, Symbol, Text};

pub use sais::{lcp_array, suffix_array};

/// Suffix array, LCP array and the text they index.
///
/// `sa` and `lcp` are stored 0-based: `sa[p]` is the 0-based start of the
/// suffix of rank `p`, and `lcp[p]` is the LCP of ranks `p - 1` and `p`
/// (`lcp[0] = 0`).
#[derive(Debug, Clone)]
pub struct SuffixArrayIndex<'t> {
    text: &'t Text,
    sa: Vec<u32>,
    lcp: Vec<u32>,
}

/// One LCP interval: a right-maximal repeat of length `depth` occurring at
/// the suffixes of ranks `lo..=hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LcpIntervalNode {
    pub depth: usize,
    pub lo: usize,
    pub hi: usize,
    /// Distinct symbols following the repeat (its right extensions).
    pub child_splits: usize,
    /// Some occurrence ends at the last text position.
    pub has_suffix_occ: bool,
    /// Distinct symbols preceding the repeat, when counted. The begin-of-text
    /// position never contributes here; it sets `has_prefix_occ` instead.
    pub distinct_prev_chars: Option<usize>,
    pub has_prefix_occ: bool,
    /// The preceding symbols (begin-of-text included) are not all equal.
    pub left_diverse: bool,
}

impl LcpIntervalNode {
    pub fn occurrence_count(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn is_right_maximal(&self) -> bool {
        self.has_suffix_occ || self.child_splits >= 2
    }

    pub fn is_left_maximal(&self) -> bool {
        match self.distinct_prev_chars {
            Some(d) => self.has_prefix_occ || d >= 2,
            None => self.left_diverse,
        }
    }

    pub fn is_maximal(&self) -> bool {
        self.is_right_maximal() && self.is_left_maximal()
    }
}

/// How much left-context information a traversal collects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeftAccounting {
    /// Exact number of distinct preceding symbols per interval.
    Count,
    /// Only whether the preceding symbols differ.
    DiversityOnly,
}

const BEGIN_SENTINEL: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PrevState {
    Empty,
    One(u32),
    Mixed,
}

impl PrevState {
    fn merge(self, other: PrevState) -> PrevState {
        match (self, other) {
            (PrevState::Empty, x) | (x, PrevState::Empty) => x,
            (PrevState::One(a), PrevState::One(b)) if a == b => PrevState::One(a),
            _ => PrevState::Mixed,
        }
    }
}

struct Fenwick {
    tree: Vec<i32>,
}

impl Fenwick {
    fn new(n: usize) -> Self {
        Fenwick {
            tree: vec![0; n + 1],
        }
    }

    fn add(&mut self, pos: usize, delta: i32) {
        let mut i = pos + 1;
        while i < self.tree.len() {
            self.tree[i] += delta;
            i += i & i.wrapping_neg();
        }
    }

    fn prefix(&self, end: usize) -> i32 {
        let mut i = end;
        let mut sum = 0;
        while i > 0 {
            sum += self.tree[i];
            i -= i & i.wrapping_neg();
        }
        sum
    }

    fn range(&self, lo: usize, hi: usize) -> i32 {
        self.prefix(hi + 1) - self.prefix(lo)
    }
}

struct Frame {
    depth: usize,
    lo: usize,
    splits: usize,
    prev: PrevState,
}

/// Child of an interval in the explicit interval tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalChild {
    Interval(usize),
    /// A single suffix, identified by its rank.
    Leaf(usize),
}

#[derive(Debug, Clone)]
pub struct TreeInterval {
    pub depth: usize,
    pub lo: usize,
    pub hi: usize,
    /// Children in rank order, hence ordered by their first symbol.
    pub children: Vec<IntervalChild>,
    /// Smallest 0-based text position among the interval's suffixes.
    pub min_pos: usize,
    pub left_diverse: bool,
}

/// Explicit LCP interval tree; the root (depth 0) is the last node.
#[derive(Debug, Clone)]
pub struct IntervalTree {
    pub nodes: Vec<TreeInterval>,
}

impl IntervalTree {
    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }
}

struct TreeFrame {
    depth: usize,
    lo: usize,
    children: Vec<IntervalChild>,
    prev: PrevState,
    min_pos: usize,
}

impl<'t> SuffixArrayIndex<'t> {
    pub fn build(text: &'t Text) -> Self {
        let symbols = text.symbols();
        let upper = symbols.iter().copied().max().unwrap_or(0);
        let widened: Vec<u32> = symbols.iter().map(|&s| u32::from(s)).collect();
        let sa = suffix_array(&widened, u32::from(upper));
        drop(widened);
        let lcp = lcp_array(symbols, &sa);
        SuffixArrayIndex { text, sa, lcp }
    }

    pub fn text(&self) -> &'t Text {
        self.text
    }

    pub fn sa(&self) -> &[u32] {
        &self.sa
    }

    pub fn lcp(&self) -> &[u32] {
        &self.lcp
    }

    /// The suffix array as 1-based text positions.
    pub fn positions(&self) -> Vec<usize> {
        self.sa.iter().map(|&p| p as usize + 1).collect()
    }

    /// Symbol preceding the suffix of rank `rank`, or `None` for the suffix
    /// starting at the first position.
    pub fn prev_char(&self, rank: usize) -> Option<Symbol> {
        match self.sa[rank] as usize {
            0 => None,
            p => Some(self.text.symbols()[p - 1]),
        }
    }

    fn prev_key(&self, rank: usize) -> u32 {
        self.prev_char(rank).map_or(BEGIN_SENTINEL, u32::from)
    }

    fn rank_of_first_suffix(&self) -> usize {
        self.sa.iter().position(|&p| p == 0).expect("suffix array is a permutation")
    }

    /// Visits every LCP interval of depth ≥ 1 bottom-up, in increasing order
    /// of `hi`.
    pub fn for_each_interval<F: FnMut(&LcpIntervalNode)>(&self, left: LeftAccounting, mut visit: F) {
        let n = self.sa.len();
        let first_rank = self.rank_of_first_suffix();
        let mut fenwick = match left {
            LeftAccounting::Count => Some(Fenwick::new(n)),
            LeftAccounting::DiversityOnly => None,
        };
        let mut last_seen = match left {
            LeftAccounting::Count => vec![u32::MAX; usize::from(Symbol::MAX) + 1],
            LeftAccounting::DiversityOnly => Vec::new(),
        };

        let mut stack = vec![Frame {
            depth: 0,
            lo: 0,
            splits: 0,
            prev: PrevState::Empty,
        }];

        for i in 1..=n {
            let leaf = i - 1;
            if let (Some(fw), Some(c)) = (fenwick.as_mut(), self.prev_char(leaf)) {
                let slot = &mut last_seen[usize::from(c)];
                if *slot != u32::MAX {
                    fw.add(*slot as usize, -1);
                }
                fw.add(leaf, 1);
                *slot = leaf as u32;
            }

            let cur = if i < n { self.lcp[i] as usize } else { 0 };
            let mut carry = PrevState::One(self.prev_key(leaf));
            let mut lo = leaf;
            while cur < stack.last().expect("root frame").depth {
                let f = stack.pop().expect("non-root frame");
                let prev = f.prev.merge(carry);
                let hi = i - 1;
                let has_suffix_occ = self.sa[f.lo] as usize + f.depth == n;
                let node = LcpIntervalNode {
                    depth: f.depth,
                    lo: f.lo,
                    hi,
                    child_splits: f.splits + 1 - usize::from(has_suffix_occ),
                    has_suffix_occ,
                    distinct_prev_chars: fenwick.as_ref().map(|fw| fw.range(f.lo, hi) as usize),
                    has_prefix_occ: (f.lo..=hi).contains(&first_rank),
                    left_diverse: prev == PrevState::Mixed,
                };
                visit(&node);
                carry = prev;
                lo = f.lo;
            }
            let top = stack.last_mut().expect("root frame");
            if cur > top.depth {
                stack.push(Frame {
                    depth: cur,
                    lo,
                    splits: 1,
                    prev: carry,
                });
            } else {
                top.prev = top.prev.merge(carry);
                if i < n {
                    top.splits += 1;
                }
            }
        }
    }

    /// Builds the explicit interval tree, root included.
    pub fn interval_tree(&self) -> IntervalTree {
        let n = self.sa.len();
        let mut nodes = Vec::new();
        let mut stack = vec![TreeFrame {
            depth: 0,
            lo: 0,
            children: Vec::new(),
            prev: PrevState::Empty,
            min_pos: usize::MAX,
        }];

        let close = |f: TreeFrame, hi: usize, nodes: &mut Vec<TreeInterval>| -> usize {
            nodes.push(TreeInterval {
                depth: f.depth,
                lo: f.lo,
                hi,
                children: f.children,
                min_pos: f.min_pos,
                left_diverse: f.prev == PrevState::Mixed,
            });
            nodes.len() - 1
        };

        for i in 1..=n {
            let leaf = i - 1;
            let cur = if i < n { self.lcp[i] as usize } else { 0 };
            let mut carry = (
                IntervalChild::Leaf(leaf),
                PrevState::One(self.prev_key(leaf)),
                self.sa[leaf] as usize,
            );
            let mut lo = leaf;
            while cur < stack.last().expect("root frame").depth {
                let mut f = stack.pop().expect("non-root frame");
                f.children.push(carry.0);
                f.prev = f.prev.merge(carry.1);
                f.min_pos = f.min_pos.min(carry.2);
                lo = f.lo;
                let (prev, min_pos) = (f.prev, f.min_pos);
                let id = close(f, i - 1, &mut nodes);
                carry = (IntervalChild::Interval(id), prev, min_pos);
            }
            let top = stack.last_mut().expect("root frame");
            if cur > top.depth {
                stack.push(TreeFrame {
                    depth: cur,
                    lo,
                    children: vec![carry.0],
                    prev: carry.1,
                    min_pos: carry.2,
                });
            } else {
                top.children.push(carry.0);
                top.prev = top.prev.merge(carry.1);
                top.min_pos = top.min_pos.min(carry.2);
            }
        }
        let root = stack.pop().expect("root frame");
        debug_assert!(stack.is_empty());
        close(root, n - 1, &mut nodes);
        IntervalTree { nodes }
    }

    /// Maximal repeats as `(depth, lo, hi)` rank intervals, excluding ε.
    fn maximal_intervals(&self) -> Vec<LcpIntervalNode> {
        let mut out = Vec::new();
        self.for_each_interval(LeftAccounting::Count, |node| {
            if node.is_maximal() {
                out.push(*node);
            }
        });
        out
    }

    pub fn measures(&self) -> MeasureReport {
        let sigma = self.text.sigma() as u64;
        let (mut mr, mut er, mut el) = (1u64, sigma, sigma);
        self.for_each_interval(LeftAccounting::Count, |node| {
            if node.is_maximal() {
                mr += 1;
                er += node.child_splits as u64;
                el += node.distinct_prev_chars.unwrap_or(0) as u64;
            }
        });
        MeasureReport::new(self.text.len() as u64, sigma, mr, er, el)
    }

    /// `(mr, er)` using right-extension accounting only.
    fn right_measures(&self) -> (u64, u64) {
        let sigma = self.text.sigma() as u64;
        let (mut mr, mut er) = (1u64, sigma);
        self.for_each_interval(LeftAccounting::DiversityOnly, |node| {
            if node.is_maximal() {
                mr += 1;
                er += node.child_splits as u64;
            }
        });
        (mr, er)
    }

    pub fn list_maximal_repeats(&self) -> Vec<RepeatRecord> {
        let text = self.text;
        let mut records = vec![RepeatRecord::from_occurrences(
            text,
            Substring::EMPTY,
            (1..=text.len()).collect(),
        )];
        let mut found: Vec<RepeatRecord> = self
            .maximal_intervals()
            .into_iter()
            .map(|node| {
                let mut occ: Vec<usize> = self.sa[node.lo..=node.hi]
                    .iter()
                    .map(|&p| p as usize + 1)
                    .collect();
                occ.sort_unstable();
                let repeat = Substring {
                    start: occ[0],
                    len: node.depth,
                };
                RepeatRecord::from_occurrences(text, repeat, occ)
            })
            .collect();
        found.sort_by_key(|r| (r.repeat.len, r.repeat.start));
        records.extend(found);
        records
    }
}

/// Measures of `t` via the suffix index.
pub fn measures(t: &Text) -> MeasureReport {
    SuffixArrayIndex::build(t).measures()
}

/// Measures of `t` where e_l is obtained as e_r of the reversed text, and
/// both sums use only right-extension counts.
pub fn measures_via_reversal(t: &Text) -> MeasureReport {
    let (mr, er) = SuffixArrayIndex::build(t).right_measures();
    let reversed = t.reversed();
    let (_, el) = SuffixArrayIndex::build(&reversed).right_measures();
    MeasureReport::new(t.len() as u64, t.sigma() as u64, mr, er, el)
}

/// All maximal repeats of `t`, ε first, then by (length, first occurrence).
pub fn list_maximal_repeats(t: &Text) -> Vec<RepeatRecord> {
    SuffixArrayIndex::build(t).list_maximal_repeats()
}
