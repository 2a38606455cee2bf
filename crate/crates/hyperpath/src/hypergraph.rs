//! r-uniform hypergraphs with tight-window semantics.
//!
//! A *tight path* is a sequence of distinct vertices in which every `r`
//! consecutive vertices form a hyperedge; a *tight cycle* closes the same
//! condition cyclically. Directed hypergraphs match windows as ordered
//! sequences, undirected ones as vertex sets.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense vertex index in `[0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub usize);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Role a vertex sequence claims to play; `Path` and `Cycle` require
/// distinct vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceRole {
    Walk,
    Path,
    Cycle,
}

/// An ordered vertex sequence tagged with its claimed role.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSequence {
    vertices: Vec<VertexId>,
    role: SequenceRole,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SequenceError {
    #[error("empty vertex sequence")]
    Empty,
    #[error("duplicate vertex {0} in a {1:?} sequence")]
    DuplicateVertex(VertexId, SequenceRole),
}

impl VertexSequence {
    pub fn new(role: SequenceRole, vertices: Vec<VertexId>) -> Result<Self, SequenceError> {
        if vertices.is_empty() {
            return Err(SequenceError::Empty);
        }
        if matches!(role, SequenceRole::Path | SequenceRole::Cycle) {
            let mut seen = HashSet::with_capacity(vertices.len());
            for &v in &vertices {
                if !seen.insert(v) {
                    return Err(SequenceError::DuplicateVertex(v, role));
                }
            }
        }
        Ok(Self { vertices, role })
    }

    pub fn path(vertices: Vec<VertexId>) -> Result<Self, SequenceError> {
        Self::new(SequenceRole::Path, vertices)
    }

    pub fn cycle(vertices: Vec<VertexId>) -> Result<Self, SequenceError> {
        Self::new(SequenceRole::Cycle, vertices)
    }

    pub fn role(&self) -> SequenceRole {
        self.role
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// A single broken invariant, reported by [`Hypergraph::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("edge {index}: has {len} vertices, expected {expected}")]
    Arity { index: usize, len: usize, expected: usize },
    #[error("edge {index}: duplicate vertex {vertex}")]
    DuplicateVertex { index: usize, vertex: VertexId },
    #[error("edge {index}: vertex {vertex} out of range (n = {n})")]
    OutOfRange { index: usize, vertex: VertexId, n: usize },
    #[error("edge {index}: duplicate of edge {first}")]
    DuplicateEdge { index: usize, first: usize },
    #[error("edge {index}: not in canonical (ascending) order for an undirected hypergraph")]
    NotCanonical { index: usize },
    #[error("uniformity r = {r} is below 2")]
    UniformityTooSmall { r: usize },
}

#[derive(Debug, Error)]
#[error("invalid hypergraph: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
pub struct InvalidHypergraph(pub Vec<Violation>);

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: malformed header, expected `r n m directed|undirected`")]
    MalformedHeader { line: usize },
    #[error("line {line}: expected {expected} vertex ids, found {got}")]
    WrongArity { line: usize, expected: usize, got: usize },
    #[error("line {line}: bad token {token:?}")]
    BadToken { line: usize, token: String },
    #[error("line {line}: vertex id {id} out of range (n = {n})")]
    IdOutOfRange { line: usize, id: usize, n: usize },
    #[error("line {line}: duplicate vertex {id} in edge")]
    DuplicateVertexInEdge { line: usize, id: usize },
    #[error("line {line}: duplicate edge")]
    DuplicateEdge { line: usize },
    #[error("expected {expected} edges, found {got}")]
    EdgeCount { expected: usize, got: usize },
    #[error("invalid hypergraph: {0}")]
    Invalid(#[from] InvalidHypergraph),
}

/// An immutable r-uniform hypergraph.
///
/// Undirected edges are stored canonically (ascending vertex ids) and
/// window membership is tested by set equality; directed edges are ordered
/// sequences matched exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    r: usize,
    n: usize,
    directed: bool,
    edges: Vec<Vec<VertexId>>,
    /// Canonical window keys (sorted for undirected) for membership tests.
    window_set: HashSet<Vec<VertexId>>,
}

impl Hypergraph {
    /// Builds a hypergraph, canonicalizing undirected edges, and rejects any
    /// invariant violation. Edge order is preserved.
    pub fn new(
        r: usize,
        n: usize,
        directed: bool,
        edges: Vec<Vec<VertexId>>,
    ) -> Result<Self, InvalidHypergraph> {
        let mut canon = edges;
        if !directed {
            for e in &mut canon {
                e.sort_unstable();
            }
        }
        let h = Self::assemble(r, n, directed, canon);
        let violations = h.validate();
        if violations.is_empty() {
            Ok(h)
        } else {
            Err(InvalidHypergraph(violations))
        }
    }

    /// Builds without validating; [`Hypergraph::validate`] reports what is wrong.
    pub fn new_unchecked(r: usize, n: usize, directed: bool, edges: Vec<Vec<VertexId>>) -> Self {
        Self::assemble(r, n, directed, edges)
    }

    fn assemble(r: usize, n: usize, directed: bool, edges: Vec<Vec<VertexId>>) -> Self {
        let mut window_set = HashSet::with_capacity(edges.len());
        for e in &edges {
            let mut key = e.clone();
            if !directed {
                key.sort_unstable();
            }
            window_set.insert(key);
        }
        Self { r, n, directed, edges, window_set }
    }

    /// Checks every invariant and returns all violations, not only the first.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.r < 2 {
            out.push(Violation::UniformityTooSmall { r: self.r });
        }
        let mut seen: HashMap<Vec<VertexId>, usize> = HashMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.len() != self.r {
                out.push(Violation::Arity { index: i, len: e.len(), expected: self.r });
                continue;
            }
            let mut uniq = HashSet::with_capacity(e.len());
            let mut bad = false;
            for &v in e {
                if v.index() >= self.n {
                    out.push(Violation::OutOfRange { index: i, vertex: v, n: self.n });
                    bad = true;
                }
                if !uniq.insert(v) {
                    out.push(Violation::DuplicateVertex { index: i, vertex: v });
                    bad = true;
                }
            }
            if bad {
                continue;
            }
            let mut key = e.clone();
            if !self.directed {
                if !e.windows(2).all(|w| w[0] < w[1]) {
                    out.push(Violation::NotCanonical { index: i });
                }
                key.sort_unstable();
            }
            match seen.entry(key) {
                std::collections::hash_map::Entry::Occupied(first) => {
                    out.push(Violation::DuplicateEdge { index: i, first: *first.get() });
                }
                std::collections::hash_map::Entry::Vacant(slot) => {
                    slot.insert(i);
                }
            }
        }
        out
    }

    pub fn uniformity(&self) -> usize {
        self.r
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn edges(&self) -> &[Vec<VertexId>] {
        &self.edges
    }

    /// Whether `window` (of length r) is an edge: exact sequence match when
    /// directed, vertex-set match when undirected.
    pub fn has_window(&self, window: &[VertexId]) -> bool {
        if window.len() != self.r {
            return false;
        }
        if self.directed {
            self.window_set.contains(window)
        } else {
            let mut key = window.to_vec();
            key.sort_unstable();
            self.window_set.contains(&key)
        }
    }

    /// True iff `seq` has at least r distinct, in-range vertices and every
    /// window of r consecutive vertices is an edge.
    pub fn is_tight_path(&self, seq: &[VertexId]) -> bool {
        if seq.len() < self.r {
            return false;
        }
        if !self.vertices_distinct_and_in_range(seq) {
            return false;
        }
        seq.windows(self.r).all(|w| self.has_window(w))
    }

    /// True iff `seq` has k >= r distinct vertices and all k cyclic windows
    /// of length r are edges.
    pub fn is_tight_cycle(&self, seq: &[VertexId]) -> bool {
        let k = seq.len();
        if k < self.r {
            return false;
        }
        if !self.vertices_distinct_and_in_range(seq) {
            return false;
        }
        let mut window = Vec::with_capacity(self.r);
        for start in 0..k {
            window.clear();
            for j in 0..self.r {
                window.push(seq[(start + j) % k]);
            }
            if !self.has_window(&window) {
                return false;
            }
        }
        true
    }

    /// Dispatches on the sequence role: `Path` and `Walk` use the tight-path
    /// window condition (walks skip the distinctness requirement), `Cycle`
    /// adds the wrap-around windows.
    pub fn check_sequence(&self, seq: &VertexSequence) -> bool {
        match seq.role() {
            SequenceRole::Path => self.is_tight_path(seq.vertices()),
            SequenceRole::Cycle => self.is_tight_cycle(seq.vertices()),
            SequenceRole::Walk => {
                seq.len() >= self.r
                    && seq.vertices().iter().all(|v| v.index() < self.n)
                    && seq.vertices().windows(self.r).all(|w| self.has_window(w))
            }
        }
    }

    fn vertices_distinct_and_in_range(&self, seq: &[VertexId]) -> bool {
        let mut seen = HashSet::with_capacity(seq.len());
        seq.iter().all(|&v| v.index() < self.n && seen.insert(v))
    }

    /// Parses the plain-text format: `r n m directed|undirected` header, then
    /// m lines of r whitespace-separated vertex ids. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        let (header_line, header) =
            lines.next().ok_or(ParseError::MalformedHeader { line: 1 })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(ParseError::MalformedHeader { line: header_line });
        }
        let parse_num = |s: &str| -> Result<usize, ParseError> {
            s.parse().map_err(|_| ParseError::MalformedHeader { line: header_line })
        };
        let r = parse_num(fields[0])?;
        let n = parse_num(fields[1])?;
        let m = parse_num(fields[2])?;
        let directed = match fields[3] {
            "directed" => true,
            "undirected" => false,
            _ => return Err(ParseError::MalformedHeader { line: header_line }),
        };

        let mut edges = Vec::with_capacity(m);
        let mut edge_lines = Vec::with_capacity(m);
        for (line, text) in lines {
            let mut edge = Vec::with_capacity(r);
            for tok in text.split_whitespace() {
                let id: usize = tok
                    .parse()
                    .map_err(|_| ParseError::BadToken { line, token: tok.to_string() })?;
                edge.push(VertexId(id));
            }
            if edge.len() != r {
                return Err(ParseError::WrongArity { line, expected: r, got: edge.len() });
            }
            edges.push(edge);
            edge_lines.push(line);
        }
        if edges.len() != m {
            return Err(ParseError::EdgeCount { expected: m, got: edges.len() });
        }

        Self::new(r, n, directed, edges).map_err(|InvalidHypergraph(violations)| {
            // Attribute the first violation to its source line.
            match &violations[0] {
                Violation::OutOfRange { index, vertex, .. } => ParseError::IdOutOfRange {
                    line: edge_lines[*index],
                    id: vertex.index(),
                    n,
                },
                Violation::DuplicateVertex { index, vertex } => {
                    ParseError::DuplicateVertexInEdge { line: edge_lines[*index], id: vertex.index() }
                }
                Violation::DuplicateEdge { index, .. } => {
                    ParseError::DuplicateEdge { line: edge_lines[*index] }
                }
                _ => ParseError::Invalid(InvalidHypergraph(violations)),
            }
        })
    }

    /// Serializes to the canonical text form accepted by [`Hypergraph::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{} {} {} {}\n",
            self.r,
            self.n,
            self.edges.len(),
            if self.directed { "directed" } else { "undirected" }
        ));
        for e in &self.edges {
            let ids: Vec<String> = e.iter().map(|v| v.index().to_string()).collect();
            out.push_str(&ids.join(" "));
            out.push('\n');
        }
        out
    }
}

/// All orderings of `items` in lexicographic order.
pub(crate) fn permutations_lex(items: &[VertexId]) -> Vec<Vec<VertexId>> {
    let mut items = items.to_vec();
    items.sort_unstable();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(items.len());
    let mut used = vec![false; items.len()];
    fn rec(
        items: &[VertexId],
        used: &mut [bool],
        current: &mut Vec<VertexId>,
        out: &mut Vec<Vec<VertexId>>,
    ) {
        if current.len() == items.len() {
            out.push(current.clone());
            return;
        }
        for i in 0..items.len() {
            if !used[i] {
                used[i] = true;
                current.push(items[i]);
                rec(items, used, current, out);
                current.pop();
                used[i] = false;
            }
        }
    }
    rec(&items, &mut used, &mut current, &mut out);
    out
}

/// Maps each (r-1)-window to the vertices that extend it to an edge.
///
/// Directed: the key is the ordered (r-1)-prefix and extensions append the
/// edge's last vertex. Undirected: the key is a sorted (r-1)-subset and each
/// edge contributes r keys, one per omitted vertex.
pub struct ExtensionIndex {
    directed: bool,
    map: HashMap<Vec<VertexId>, Vec<VertexId>>,
}

impl ExtensionIndex {
    pub fn new(h: &Hypergraph) -> Self {
        let mut map: HashMap<Vec<VertexId>, Vec<VertexId>> = HashMap::new();
        if h.is_directed() {
            for e in h.edges() {
                let key = e[..e.len() - 1].to_vec();
                map.entry(key).or_default().push(e[e.len() - 1]);
            }
        } else {
            for e in h.edges() {
                for omit in 0..e.len() {
                    let mut key: Vec<VertexId> = e
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != omit)
                        .map(|(_, &v)| v)
                        .collect();
                    key.sort_unstable();
                    map.entry(key).or_default().push(e[omit]);
                }
            }
        }
        for exts in map.values_mut() {
            exts.sort_unstable();
            exts.dedup();
        }
        Self { directed: h.is_directed(), map }
    }

    /// Vertices `v` such that `window + [v]`'s last r entries form an edge.
    /// `window` is the ordered tail of length r-1.
    pub fn extensions(&self, window: &[VertexId]) -> &[VertexId] {
        if self.directed {
            self.map.get(window).map_or(&[], |v| v.as_slice())
        } else {
            let mut key = window.to_vec();
            key.sort_unstable();
            self.map.get(&key).map_or(&[], |v| v.as_slice())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(xs: &[usize]) -> Vec<VertexId> {
        xs.iter().map(|&x| VertexId(x)).collect()
    }

    fn graph(r: usize, n: usize, directed: bool, edges: &[&[usize]]) -> Hypergraph {
        Hypergraph::new(r, n, directed, edges.iter().map(|e| ids(e)).collect()).unwrap()
    }

    #[test]
    fn parse_directed() {
        let h = Hypergraph::parse("3 4 2 directed\n0 1 2\n1 2 3\n").unwrap();
        assert_eq!(h.uniformity(), 3);
        assert_eq!(h.num_vertices(), 4);
        assert_eq!(h.num_edges(), 2);
        assert!(h.is_directed());
    }

    #[test]
    fn parse_undirected_canonicalizes() {
        let h = Hypergraph::parse("3 3 1 undirected\n2 0 1\n").unwrap();
        assert_eq!(h.edges()[0], ids(&[0, 1, 2]));
    }

    #[test]
    fn parse_duplicate_vertex_in_edge() {
        let err = Hypergraph::parse("3 3 1 directed\n0 0 1\n").unwrap_err();
        assert!(matches!(err, ParseError::DuplicateVertexInEdge { line: 2, id: 0 }));
    }

    #[test]
    fn parse_reports_line_numbers() {
        let err = Hypergraph::parse("# comment\n3 4 2 directed\n0 1 2\n0 1 9\n").unwrap_err();
        assert!(matches!(err, ParseError::IdOutOfRange { line: 4, id: 9, .. }));
        let err = Hypergraph::parse("3 4 1 directed\n0 1\n").unwrap_err();
        assert!(matches!(err, ParseError::WrongArity { line: 2, expected: 3, got: 2 }));
        let err = Hypergraph::parse("3 4 directed\n").unwrap_err();
        assert!(matches!(err, ParseError::MalformedHeader { line: 1 }));
    }

    #[test]
    fn roundtrip_is_identity_on_canonical_form() {
        let text = "3 5 3 undirected\n4 0 2\n1 2 3\n0 1 2\n";
        let h = Hypergraph::parse(text).unwrap();
        let canonical = h.to_text();
        let h2 = Hypergraph::parse(&canonical).unwrap();
        assert_eq!(h, h2);
        assert_eq!(canonical, h2.to_text());
    }

    #[test]
    fn tight_path_directed() {
        let h = graph(3, 4, true, &[&[0, 1, 2], &[1, 2, 3]]);
        assert!(h.is_tight_path(&ids(&[0, 1, 2, 3])));
        assert!(!h.is_tight_path(&ids(&[3, 2, 1, 0])));
        assert!(!h.is_tight_path(&ids(&[0, 1])));
        assert!(!h.is_tight_path(&ids(&[0, 1, 2, 0]))); // repeated vertex
    }

    #[test]
    fn tight_path_undirected_matches_sets() {
        let h = graph(3, 3, false, &[&[0, 1, 2]]);
        assert!(h.is_tight_path(&ids(&[2, 0, 1])));
    }

    #[test]
    fn tight_cycle_requires_wrap_windows() {
        // all 4 cyclic windows of (0,1,2,3) with r = 3
        let h = graph(3, 4, true, &[&[0, 1, 2], &[1, 2, 3], &[2, 3, 0], &[3, 0, 1]]);
        assert!(h.is_tight_cycle(&ids(&[0, 1, 2, 3])));
        let path_only = graph(3, 4, true, &[&[0, 1, 2], &[1, 2, 3]]);
        assert!(!path_only.is_tight_cycle(&ids(&[0, 1, 2, 3])));
        let single = graph(3, 3, true, &[&[0, 1, 2]]);
        assert!(!single.is_tight_cycle(&ids(&[0, 1, 2]))); // (1,2,0),(2,0,1) missing
        assert!(!single.is_tight_cycle(&ids(&[0, 1])));
    }

    #[test]
    fn validate_reports_every_violation() {
        let h = Hypergraph::new_unchecked(
            3,
            3,
            true,
            vec![ids(&[0, 1, 2]), ids(&[0, 1]), ids(&[0, 1, 2]), ids(&[0, 3, 1])],
        );
        let v = h.validate();
        assert!(v.contains(&Violation::Arity { index: 1, len: 2, expected: 3 }));
        assert!(v.contains(&Violation::DuplicateEdge { index: 2, first: 0 }));
        assert!(v.contains(&Violation::OutOfRange { index: 3, vertex: VertexId(3), n: 3 }));
        assert!(graph(3, 4, true, &[&[0, 1, 2]]).validate().is_empty());
    }

    #[test]
    fn subsequences_of_tight_paths_are_tight() {
        let h = graph(3, 6, true, &[&[0, 1, 2], &[1, 2, 3], &[2, 3, 4], &[3, 4, 5]]);
        let seq = ids(&[0, 1, 2, 3, 4, 5]);
        assert!(h.is_tight_path(&seq));
        for start in 0..seq.len() {
            for end in start + 3..=seq.len() {
                assert!(h.is_tight_path(&seq[start..end]), "window {start}..{end}");
            }
        }
        // and on random planted instances with noise
        for seed in 0..20 {
            let r = 3 + (seed as usize % 3);
            let k = r + 3;
            let (h, plant) = crate::gen::planted_path(r, k + 4, k, 10, seed).unwrap();
            assert!(h.is_tight_path(&plant));
            for start in 0..plant.len() {
                for end in (start + r)..=plant.len() {
                    assert!(h.is_tight_path(&plant[start..end]), "seed {seed}");
                }
            }
        }
    }

    #[test]
    fn extension_index_directed_and_undirected() {
        let h = graph(3, 4, true, &[&[0, 1, 2], &[1, 2, 3]]);
        let idx = ExtensionIndex::new(&h);
        assert_eq!(idx.extensions(&ids(&[0, 1])), ids(&[2]).as_slice());
        assert_eq!(idx.extensions(&ids(&[1, 2])), ids(&[3]).as_slice());
        assert!(idx.extensions(&ids(&[2, 3])).is_empty());

        let hu = graph(3, 4, false, &[&[0, 1, 2], &[1, 2, 3]]);
        let uidx = ExtensionIndex::new(&hu);
        let mut exts = uidx.extensions(&ids(&[2, 1])).to_vec();
        exts.sort_unstable();
        assert_eq!(exts, ids(&[0, 3]));
    }

    #[test]
    fn sequence_roles() {
        assert!(VertexSequence::path(ids(&[0, 1, 1])).is_err());
        assert!(VertexSequence::new(SequenceRole::Walk, ids(&[0, 1, 1])).is_ok());
        assert!(VertexSequence::path(vec![]).is_err());
    }

    proptest::proptest! {
        #[test]
        fn parse_serialize_roundtrip(
            seed in 0u64..5000,
            directed in proptest::bool::ANY,
            r in 2usize..5,
            extra in 0usize..8,
        ) {
            let n = r + 2 + (seed as usize % 5);
            let m = (extra + 1).min(6);
            if let Ok(h) = crate::gen::random_hypergraph(r, n, m, directed, seed) {
                let text = h.to_text();
                let reparsed = Hypergraph::parse(&text).unwrap();
                proptest::prop_assert_eq!(&h, &reparsed);
                proptest::prop_assert_eq!(text, reparsed.to_text());
            }
        }
    }
}
