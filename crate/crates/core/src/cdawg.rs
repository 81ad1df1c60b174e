//! Compact directed acyclic word graph of a terminator-ended text.
//!
//! Nodes are the end-position equivalence classes whose longest member is a
//! maximal repeat, plus the sink. The construction reads them off the LCP
//! interval tree: a class is identified by `(smallest end position, size)`,
//! which is shared by every right-maximal string in it, so each suffix-tree
//! child is redirected to the maximal repeat of its class.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::index::{IntervalChild, SuffixArrayIndex};
use crate::oracle::require_terminator;
use crate::text::{Substring, Symbol, Text};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CdawgEdge {
    pub from: usize,
    /// Label as a reference into the text.
    pub label: Substring,
    pub to: usize,
}

#[derive(Debug, Clone)]
pub struct Cdawg {
    text: Text,
    node_repeats: Vec<Substring>,
    /// Grouped by source node, each group ordered by first label symbol.
    edges: Vec<CdawgEdge>,
    first_symbols: Vec<Symbol>,
    offsets: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CdawgStats {
    pub node_count: usize,
    pub edge_count: usize,
    pub total_label_length: usize,
    pub er: u64,
    pub mr: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CdawgJson {
    pub text_len: usize,
    pub nodes: Vec<NodeJson>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeJson {
    pub id: usize,
    pub start: usize,
    pub len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub from: usize,
    pub start: usize,
    pub len: usize,
    pub to: usize,
}

impl Cdawg {
    /// Assembles a graph from its nodes (source first, sink last) and edges.
    pub(crate) fn from_parts(t: &Text, node_repeats: Vec<Substring>, mut edges: Vec<CdawgEdge>) -> Self {
        let first = |e: &CdawgEdge| t.at(e.label.start);
        edges.sort_by_key(|e| (e.from, first(e)));
        let first_symbols = edges.iter().map(first).collect();
        let mut offsets = vec![0; node_repeats.len() + 1];
        for e in &edges {
            offsets[e.from + 1] += 1;
        }
        for i in 1..offsets.len() {
            offsets[i] += offsets[i - 1];
        }
        Cdawg {
            text: t.clone(),
            node_repeats,
            edges,
            first_symbols,
            offsets,
        }
    }

    pub fn text(&self) -> &Text {
        &self.text
    }

    pub fn source(&self) -> usize {
        0
    }

    pub fn sink(&self) -> usize {
        self.node_repeats.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.node_repeats.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[CdawgEdge] {
        &self.edges
    }

    pub fn out_edges(&self, node: usize) -> &[CdawgEdge] {
        &self.edges[self.offsets[node]..self.offsets[node + 1]]
    }

    /// The maximal repeat a node stands for (ε for the source, the whole
    /// text for the sink).
    pub fn node_repeat(&self, node: usize) -> Substring {
        self.node_repeats[node]
    }

    pub fn label(&self, edge: &CdawgEdge) -> &[Symbol] {
        self.text.slice(edge.label)
    }

    pub fn total_label_length(&self) -> usize {
        self.edges.iter().map(|e| e.label.len).sum()
    }

    fn edge_by_symbol(&self, node: usize, symbol: Symbol) -> Option<&CdawgEdge> {
        let range = self.offsets[node]..self.offsets[node + 1];
        let firsts = &self.first_symbols[range.clone()];
        firsts
            .binary_search(&symbol)
            .ok()
            .map(|k| &self.edges[range.start + k])
    }

    /// Whether `pattern` occurs in the indexed text.
    pub fn contains(&self, pattern: &[Symbol]) -> bool {
        let mut node = self.source();
        let mut i = 0;
        while i < pattern.len() {
            let Some(edge) = self.edge_by_symbol(node, pattern[i]) else {
                return false;
            };
            let label = self.label(edge);
            let m = label.len().min(pattern.len() - i);
            if label[..m] != pattern[i..i + m] {
                return false;
            }
            i += m;
            node = edge.to;
        }
        true
    }

    /// Strings spelled by every source-to-sink path.
    pub fn spelled_paths(&self) -> Vec<Vec<Symbol>> {
        let mut out = Vec::new();
        let mut stack = vec![(self.source(), Vec::new())];
        while let Some((node, spelled)) = stack.pop() {
            if node == self.sink() {
                out.push(spelled);
                continue;
            }
            for e in self.out_edges(node) {
                let mut next = spelled.clone();
                next.extend_from_slice(self.label(e));
                stack.push((e.to, next));
            }
        }
        out
    }

    /// Structural equality up to node renaming, comparing edge label contents
    /// rather than label positions.
    pub fn is_label_isomorphic(&self, other: &Cdawg) -> bool {
        if self.node_count() != other.node_count() || self.edge_count() != other.edge_count() {
            return false;
        }
        let mut image = vec![usize::MAX; self.node_count()];
        let mut used = vec![false; other.node_count()];
        image[self.source()] = other.source();
        used[other.source()] = true;
        let mut queue = VecDeque::from([self.source()]);
        while let Some(u) = queue.pop_front() {
            let v = image[u];
            let (mine, theirs) = (self.out_edges(u), other.out_edges(v));
            if mine.len() != theirs.len() {
                return false;
            }
            for (a, b) in mine.iter().zip(theirs) {
                if self.label(a) != other.label(b) {
                    return false;
                }
                if image[a.to] == usize::MAX {
                    if used[b.to] {
                        return false;
                    }
                    image[a.to] = b.to;
                    used[b.to] = true;
                    queue.push_back(a.to);
                } else if image[a.to] != b.to {
                    return false;
                }
            }
        }
        image[self.sink()] == other.sink() && image.iter().all(|&x| x != usize::MAX)
    }

    /// Checks the structural invariants: acyclic, every node reachable from
    /// the source and co-reachable to the sink, distinct first symbols.
    pub fn validate(&self) -> Result<()> {
        let count = self.node_count();
        for node in 0..count {
            let firsts = &self.first_symbols[self.offsets[node]..self.offsets[node + 1]];
            if firsts.windows(2).any(|w| w[0] == w[1]) {
                return Err(CoreError::CdawgInvariant(format!(
                    "node {node} has two edges with the same first symbol"
                )));
            }
        }
        let mut indegree = vec![0usize; count];
        for e in &self.edges {
            indegree[e.to] += 1;
        }
        let mut order = Vec::with_capacity(count);
        let mut ready: Vec<usize> = (0..count).filter(|&v| indegree[v] == 0).collect();
        if ready != [self.source()] {
            return Err(CoreError::CdawgInvariant("source is not the unique root".into()));
        }
        while let Some(u) = ready.pop() {
            order.push(u);
            for e in self.out_edges(u) {
                indegree[e.to] -= 1;
                if indegree[e.to] == 0 {
                    ready.push(e.to);
                }
            }
        }
        if order.len() != count {
            return Err(CoreError::CdawgInvariant("graph has a cycle".into()));
        }
        for node in 0..count {
            if node != self.sink() && self.out_edges(node).is_empty() {
                return Err(CoreError::CdawgInvariant(format!("node {node} is a dead end")));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> CdawgJson {
        CdawgJson {
            text_len: self.text.len(),
            nodes: self
                .node_repeats
                .iter()
                .enumerate()
                .map(|(id, r)| NodeJson {
                    id,
                    start: r.start,
                    len: r.len,
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    from: e.from,
                    start: e.label.start,
                    len: e.label.len,
                    to: e.to,
                })
                .collect(),
        }
    }
}

/// Builds the CDAWG of `t` from its suffix array. The last symbol of `t`
/// must occur nowhere else.
pub fn build_cdawg(t: &Text) -> Result<Cdawg> {
    require_terminator(t)?;
    let n = t.len();
    let index = SuffixArrayIndex::build(t);
    let sa = index.sa();
    let tree = index.interval_tree();
    let root = tree.root();

    let mut maximal: Vec<usize> = (0..root).filter(|&i| tree.nodes[i].left_diverse).collect();
    maximal.sort_by_key(|&i| (tree.nodes[i].depth, tree.nodes[i].min_pos));

    let class_key = |i: usize| {
        let node = &tree.nodes[i];
        (node.min_pos + node.depth, node.hi - node.lo + 1)
    };
    let mut node_of_class = HashMap::with_capacity(maximal.len());
    let mut node_repeats = Vec::with_capacity(maximal.len() + 2);
    let mut interval_of_node = Vec::with_capacity(maximal.len() + 1);
    node_repeats.push(Substring::EMPTY);
    interval_of_node.push(root);
    for &i in &maximal {
        node_of_class.insert(class_key(i), node_repeats.len());
        node_repeats.push(Substring {
            start: tree.nodes[i].min_pos + 1,
            len: tree.nodes[i].depth,
        });
        interval_of_node.push(i);
    }
    let sink = node_repeats.len();
    node_repeats.push(Substring { start: 1, len: n });

    let mut edges = Vec::new();
    for (from, &interval) in interval_of_node.iter().enumerate() {
        let parent = &tree.nodes[interval];
        for child in &parent.children {
            let (rank, len, to) = match *child {
                IntervalChild::Interval(c) => {
                    let node = &tree.nodes[c];
                    let to = *node_of_class.get(&class_key(c)).ok_or_else(|| {
                        CoreError::CdawgInvariant(format!(
                            "interval of depth {} has no maximal repeat in its class",
                            node.depth
                        ))
                    })?;
                    (node.lo, node.depth - parent.depth, to)
                }
                IntervalChild::Leaf(rank) => {
                    let len = n - (sa[rank] as usize + parent.depth);
                    (rank, len, sink)
                }
            };
            if len == 0 {
                return Err(CoreError::CdawgInvariant("empty edge label".into()));
            }
            edges.push(CdawgEdge {
                from,
                label: Substring {
                    start: sa[rank] as usize + parent.depth + 1,
                    len,
                },
                to,
            });
        }
    }

    Ok(Cdawg::from_parts(t, node_repeats, edges))
}

/// Size statistics, asserting `edges = e_r` and `nodes = m_r + 1` against the
/// suffix-index measures of the same text.
pub fn stats(c: &Cdawg, t: &Text) -> Result<CdawgStats> {
    let report = crate::index::measures(t);
    let s = CdawgStats {
        node_count: c.node_count(),
        edge_count: c.edge_count(),
        total_label_length: c.total_label_length(),
        er: report.er,
        mr: report.mr,
    };
    if s.edge_count as u64 != s.er {
        return Err(CoreError::StatsMismatch(format!(
            "edge count {} but e_r = {}",
            s.edge_count, s.er
        )));
    }
    if s.node_count as u64 != s.mr + 1 {
        return Err(CoreError::StatsMismatch(format!(
            "node count {} but m_r + 1 = {}",
            s.node_count,
            s.mr + 1
        )));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::build_reference_cdawg;

    fn text(b: &[u8]) -> Text {
        Text::from_bytes(b).unwrap()
    }

    #[test]
    fn small_shapes() {
        for (s, nodes, edges) in [(&b"abab#"[..], 3, 5), (b"aa#", 3, 4), (b"ab#", 2, 3)] {
            let t = text(s);
            let c = build_cdawg(&t).unwrap();
            assert_eq!((c.node_count(), c.edge_count()), (nodes, edges), "{t:?}");
            c.validate().unwrap();
            let st = stats(&c, &t).unwrap();
            assert_eq!(st.er as usize, edges);
        }
    }

    #[test]
    fn matches_reference() {
        for s in [&b"abab#"[..], b"aa#", b"banana#", b"abcabcabd$", b"1a2ab3abc4abcd#"] {
            let t = text(s);
            let fast = build_cdawg(&t).unwrap();
            let reference = build_reference_cdawg(&t).unwrap();
            assert!(fast.is_label_isomorphic(&reference), "{t:?}");
            assert!(reference.is_label_isomorphic(&fast), "{t:?}");
        }
    }

    #[test]
    fn missing_terminator() {
        assert!(matches!(
            build_cdawg(&text(b"abab")),
            Err(CoreError::MissingTerminator { last: 98, count: 2 })
        ));
    }

    #[test]
    fn contains_queries() {
        let c = build_cdawg(&text(b"banana#")).unwrap();
        assert!(c.contains(b"nan".map(u16::from).as_slice()));
        assert!(!c.contains(b"nab".map(u16::from).as_slice()));
        assert!(c.contains(&[]));
        assert!(c.contains(b"banana#".map(u16::from).as_slice()));
        assert!(!c.contains(b"banana#a".map(u16::from).as_slice()));
    }

    #[test]
    fn paths_spell_suffixes() {
        let t = text(b"abcabcabd$");
        let c = build_cdawg(&t).unwrap();
        let mut spelled = c.spelled_paths();
        spelled.sort();
        let mut suffixes: Vec<Vec<Symbol>> = (0..t.len()).map(|i| t.symbols()[i..].to_vec()).collect();
        suffixes.sort();
        assert_eq!(spelled, suffixes);
    }

    #[test]
    fn isomorphism_detects_differences() {
        let a = build_cdawg(&text(b"abab#")).unwrap();
        let b = build_cdawg(&text(b"abac#")).unwrap();
        assert!(!a.is_label_isomorphic(&b));
    }

    #[test]
    fn json_is_deterministic() {
        let t = text(b"aa#");
        let c = build_cdawg(&t).unwrap();
        let json = serde_json::to_string(&c.to_json()).unwrap();
        assert_eq!(json, serde_json::to_string(&build_cdawg(&t).unwrap().to_json()).unwrap());
        let back: CdawgJson = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c.to_json());
        assert_eq!(back.nodes.len(), 3);
        assert_eq!(back.edges.len(), 4);
    }
}
