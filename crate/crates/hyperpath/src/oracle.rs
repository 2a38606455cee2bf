//! Exponential-time exact reference solvers.
//!
//! These are the ground truth for every randomized or reduced computation:
//! deliberately simple search code, guarded against accidental blowups.

use std::collections::HashMap;
use std::ops::AddAssign;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::hypergraph::{ExtensionIndex, Hypergraph, VertexId};

/// Default vertex-count guard for path/cycle search.
pub const DEFAULT_SEARCH_LIMIT: usize = 20;
/// Default element-count guard for cover search.
pub const DEFAULT_COVER_LIMIT: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("k = {k} is below the uniformity r = {r}")]
    KTooSmall { k: usize, r: usize },
    #[error("instance size {size} exceeds the brute-force guard {limit}; raise the limit to override")]
    SizeGuard { size: usize, limit: usize },
}

#[derive(Debug, Error)]
pub enum ExcParseError {
    #[error("line {line}: malformed header, expected `n m [t]`")]
    MalformedHeader { line: usize },
    #[error("line {line}: bad token {token:?}")]
    BadToken { line: usize, token: String },
    #[error("expected {expected} sets, found {got}")]
    SetCount { expected: usize, got: usize },
    #[error("invalid instance: {0}")]
    Invalid(#[from] InstanceError),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("set {index} is empty")]
    EmptySet { index: usize },
    #[error("set {index}: element {element} out of range (n = {n})")]
    ElementOutOfRange { index: usize, element: usize, n: usize },
    #[error("set {index}: duplicate element {element}")]
    DuplicateElement { index: usize, element: usize },
    #[error("threshold {t} exceeds the number of sets {m}")]
    ThresholdTooLarge { t: usize, m: usize },
    #[error("threshold must be positive")]
    ZeroThreshold,
}

/// Exact Cover input: ground set `0..n` and a family of subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactCoverInstance {
    n: usize,
    sets: Vec<Vec<usize>>,
}

impl ExactCoverInstance {
    /// Duplicate sets are permitted; empty sets, duplicate elements within a
    /// set, and out-of-range elements are not.
    pub fn new(n: usize, sets: Vec<Vec<usize>>) -> Result<Self, InstanceError> {
        for (index, s) in sets.iter().enumerate() {
            if s.is_empty() {
                return Err(InstanceError::EmptySet { index });
            }
            let mut seen = vec![false; n];
            for &e in s {
                if e >= n {
                    return Err(InstanceError::ElementOutOfRange { index, element: e, n });
                }
                if seen[e] {
                    return Err(InstanceError::DuplicateElement { index, element: e });
                }
                seen[e] = true;
            }
        }
        Ok(Self { n, sets })
    }

    pub fn num_elements(&self) -> usize {
        self.n
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn num_sets(&self) -> usize {
        self.sets.len()
    }

    /// True iff `indices` picks pairwise-disjoint sets whose union is the
    /// whole ground set.
    pub fn is_exact_cover(&self, indices: &[usize]) -> bool {
        let mut covered = vec![false; self.n];
        for &i in indices {
            let Some(set) = self.sets.get(i) else { return false };
            for &e in set {
                if covered[e] {
                    return false;
                }
                covered[e] = true;
            }
        }
        covered.iter().all(|&c| c)
    }

    /// Parses `n m` then m whitespace-separated element-id lines; a third
    /// header number marks a Set Partitioning instance and is rejected here.
    pub fn parse(text: &str) -> Result<Self, ExcParseError> {
        let (inst, t) = parse_cover_text(text)?;
        if t.is_some() {
            // tolerated: the threshold is simply ignored for plain EXC use
        }
        Ok(inst)
    }

    pub fn to_text(&self) -> String {
        render_cover_text(self, None)
    }
}

/// Set Partitioning input: an Exact Cover instance plus a size threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetPartitioningInstance {
    base: ExactCoverInstance,
    threshold: usize,
}

impl SetPartitioningInstance {
    pub fn new(base: ExactCoverInstance, threshold: usize) -> Result<Self, InstanceError> {
        if threshold == 0 {
            return Err(InstanceError::ZeroThreshold);
        }
        if threshold > base.num_sets() {
            return Err(InstanceError::ThresholdTooLarge { t: threshold, m: base.num_sets() });
        }
        Ok(Self { base, threshold })
    }

    pub fn base(&self) -> &ExactCoverInstance {
        &self.base
    }

    pub fn threshold(&self) -> usize {
        self.threshold
    }

    pub fn parse(text: &str) -> Result<Self, ExcParseError> {
        let (base, t) = parse_cover_text(text)?;
        let t = t.ok_or(ExcParseError::MalformedHeader { line: 1 })?;
        Self::new(base, t).map_err(ExcParseError::Invalid)
    }

    pub fn to_text(&self) -> String {
        render_cover_text(&self.base, Some(self.threshold))
    }
}

fn parse_cover_text(text: &str) -> Result<(ExactCoverInstance, Option<usize>), ExcParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (header_line, header) = lines.next().ok_or(ExcParseError::MalformedHeader { line: 1 })?;
    let nums: Result<Vec<usize>, _> = header.split_whitespace().map(str::parse).collect();
    let nums = nums.map_err(|_| ExcParseError::MalformedHeader { line: header_line })?;
    let (n, m, t) = match nums.as_slice() {
        [n, m] => (*n, *m, None),
        [n, m, t] => (*n, *m, Some(*t)),
        _ => return Err(ExcParseError::MalformedHeader { line: header_line }),
    };
    let mut sets = Vec::with_capacity(m);
    for (line, text) in lines {
        let mut set = Vec::new();
        for tok in text.split_whitespace() {
            let e: usize =
                tok.parse().map_err(|_| ExcParseError::BadToken { line, token: tok.to_string() })?;
            set.push(e);
        }
        sets.push(set);
    }
    if sets.len() != m {
        return Err(ExcParseError::SetCount { expected: m, got: sets.len() });
    }
    Ok((ExactCoverInstance::new(n, sets)?, t))
}

fn render_cover_text(inst: &ExactCoverInstance, t: Option<usize>) -> String {
    let mut out = match t {
        Some(t) => format!("{} {} {}\n", inst.n, inst.sets.len(), t),
        None => format!("{} {}\n", inst.n, inst.sets.len()),
    };
    for s in &inst.sets {
        let ids: Vec<String> = s.iter().map(usize::to_string).collect();
        out.push_str(&ids.join(" "));
        out.push('\n');
    }
    out
}

/// Exhaustive DFS for a tight k-path; returns a witness sequence when one
/// exists. Walks are extended only through windows that are edges.
pub fn exists_tight_path_bruteforce(
    h: &Hypergraph,
    k: usize,
    limit: Option<usize>,
) -> Result<Option<Vec<VertexId>>, OracleError> {
    search_tight(h, k, limit, false)
}

/// As the path search, but accepts only sequences whose k cyclic windows are
/// all edges.
pub fn exists_tight_cycle_bruteforce(
    h: &Hypergraph,
    k: usize,
    limit: Option<usize>,
) -> Result<Option<Vec<VertexId>>, OracleError> {
    search_tight(h, k, limit, true)
}

fn search_tight(
    h: &Hypergraph,
    k: usize,
    limit: Option<usize>,
    cycle: bool,
) -> Result<Option<Vec<VertexId>>, OracleError> {
    let r = h.uniformity();
    if k < r {
        return Err(OracleError::KTooSmall { k, r });
    }
    let limit = limit.unwrap_or(DEFAULT_SEARCH_LIMIT);
    if h.num_vertices() > limit {
        return Err(OracleError::SizeGuard { size: h.num_vertices(), limit });
    }
    if k > h.num_vertices() {
        return Ok(None);
    }

    let index = ExtensionIndex::new(h);
    let mut used = vec![false; h.num_vertices()];
    let mut seq: Vec<VertexId> = Vec::with_capacity(k);

    fn dfs(
        h: &Hypergraph,
        index: &ExtensionIndex,
        seq: &mut Vec<VertexId>,
        used: &mut [bool],
        k: usize,
        cycle: bool,
    ) -> bool {
        if seq.len() == k {
            return if cycle { h.is_tight_cycle(seq) } else { true };
        }
        let tail_start = seq.len() + 1 - h.uniformity();
        let tail: Vec<VertexId> = seq[tail_start..].to_vec();
        for &v in index.extensions(&tail) {
            if used[v.index()] {
                continue;
            }
            used[v.index()] = true;
            seq.push(v);
            if dfs(h, index, seq, used, k, cycle) {
                return true;
            }
            seq.pop();
            used[v.index()] = false;
        }
        false
    }

    // Start from every edge; undirected edges contribute every ordering.
    let mut starts: Vec<Vec<VertexId>> = Vec::new();
    for e in h.edges() {
        if h.is_directed() {
            starts.push(e.clone());
        } else {
            starts.extend(crate::hypergraph::permutations_lex(e));
        }
    }
    for start in starts {
        seq.clear();
        seq.extend_from_slice(&start);
        for v in &start {
            used[v.index()] = true;
        }
        if dfs(h, &index, &mut seq, &mut used, k, cycle) {
            return Ok(Some(seq));
        }
        for v in &start {
            used[v.index()] = false;
        }
    }
    Ok(None)
}

/// Counts length-k tight walks (vertices may repeat) by dynamic programming
/// over (last ordered window, length).
///
/// Generic over the accumulator so callers can pick plain integers or a
/// wider type; counts grow fast on dense graphs.
pub fn count_tight_walks<T>(h: &Hypergraph, k: usize) -> Result<T, OracleError>
where
    T: Zero + One + AddAssign + Clone,
{
    let r = h.uniformity();
    if k < r {
        return Err(OracleError::KTooSmall { k, r });
    }

    // States are ordered windows: the edges themselves when directed, every
    // ordering of every edge when undirected.
    let mut states: Vec<Vec<VertexId>> = Vec::new();
    for e in h.edges() {
        if h.is_directed() {
            states.push(e.clone());
        } else {
            states.extend(crate::hypergraph::permutations_lex(e));
        }
    }
    let mut by_prefix: HashMap<&[VertexId], Vec<usize>> = HashMap::new();
    for (i, w) in states.iter().enumerate() {
        by_prefix.entry(&w[..r - 1]).or_default().push(i);
    }
    // successors[i] = states reachable by shifting one vertex
    let successors: Vec<Vec<usize>> = states
        .iter()
        .map(|w| by_prefix.get(&w[1..r]).cloned().unwrap_or_default())
        .collect();

    let mut counts: Vec<T> = vec![T::one(); states.len()];
    for _t in (r + 1)..=k {
        let mut next: Vec<T> = vec![T::zero(); states.len()];
        for (i, c) in counts.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &s in &successors[i] {
                next[s] += c.clone();
            }
        }
        counts = next;
    }
    let mut total = T::zero();
    for c in counts {
        total += c;
    }
    Ok(total)
}

/// Backtracking exact-cover search: always branch on the lowest uncovered
/// element. Returns a witness family of pairwise-disjoint set indices whose
/// union is the ground set.
pub fn solve_exact_cover_bruteforce(
    inst: &ExactCoverInstance,
    limit: Option<usize>,
) -> Result<Option<Vec<usize>>, OracleError> {
    let limit = limit.unwrap_or(DEFAULT_COVER_LIMIT);
    if inst.num_elements() > limit {
        return Err(OracleError::SizeGuard { size: inst.num_elements(), limit });
    }
    let mut chosen = Vec::new();
    let mut covered = vec![false; inst.num_elements()];
    if cover_rec(inst, &mut covered, &mut chosen, usize::MAX) {
        chosen.sort_unstable();
        Ok(Some(chosen))
    } else {
        Ok(None)
    }
}

/// True iff an exact cover using at most `inst.threshold()` sets exists.
pub fn solve_set_partitioning_bruteforce(
    inst: &SetPartitioningInstance,
    limit: Option<usize>,
) -> Result<bool, OracleError> {
    let limit = limit.unwrap_or(DEFAULT_COVER_LIMIT);
    let base = inst.base();
    if base.num_elements() > limit {
        return Err(OracleError::SizeGuard { size: base.num_elements(), limit });
    }
    let mut chosen = Vec::new();
    let mut covered = vec![false; base.num_elements()];
    Ok(cover_rec(base, &mut covered, &mut chosen, inst.threshold()))
}

fn cover_rec(
    inst: &ExactCoverInstance,
    covered: &mut [bool],
    chosen: &mut Vec<usize>,
    max_sets: usize,
) -> bool {
    let Some(lowest) = covered.iter().position(|&c| !c) else {
        return true; // everything covered (vacuously true for n = 0)
    };
    if chosen.len() >= max_sets {
        return false;
    }
    for (i, set) in inst.sets().iter().enumerate() {
        if !set.contains(&lowest) || set.iter().any(|&e| covered[e]) {
            continue;
        }
        set.iter().for_each(|&e| covered[e] = true);
        chosen.push(i);
        if cover_rec(inst, covered, chosen, max_sets) {
            return true;
        }
        chosen.pop();
        set.iter().for_each(|&e| covered[e] = false);
    }
    false
}
