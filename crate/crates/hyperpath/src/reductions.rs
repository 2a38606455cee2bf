//! Constructive reductions: orientation expansion, Exact Cover to
//! k-HyperPath, padding to the gadget's normal form, color-coding from Set
//! Partitioning to Exact Cover, and a subset-closure step from Set Cover to
//! Set Partitioning.
//!
//! # The exact-cover gadget
//!
//! Ground-set elements become shared *element-nodes*; each set gets its own
//! chain of *set-nodes*, one per member. A tight k-path must alternate
//! blocks of r-2 element-nodes with single set-nodes, so it traces the sets
//! of an exact cover in index order, entering through x_start and leaving
//! through x_end, with k = (n+2)(1+1/(r-2))+1.
//!
//! Six special vertices pin the path's ends: u_start/x_start and
//! x_end/u_end as in the four-special design, plus dedicated set-nodes
//! u_open (position r) and u_close (position k-r+1). The two extras replace
//! the first and last per-set set-nodes; without them the edges touching the
//! path ends vary in a *set-node* across sets, and a stray set-node can ride
//! along at one end of the path (breaking the path-to-cover translation; for
//! r = 3 the per-set budget is short by one node altogether). With them,
//! those edges vary only in element-nodes, which any full path consumes
//! anyway.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{permutations_lex, Hypergraph, VertexId};
use crate::oracle::{ExactCoverInstance, SetPartitioningInstance};

/// Orientation expansion refuses r above this by default (r! blowup).
pub const DEFAULT_ORIENTATION_GUARD: usize = 7;
/// Default cap on sets generated by the combinatorial reductions.
pub const DEFAULT_REDUCTION_BUDGET: usize = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReductionError {
    #[error("hypergraph is already directed")]
    AlreadyDirected,
    #[error("r = {r} exceeds the orientation guard {guard} (expansion multiplies m by r!)")]
    OrientationGuard { r: usize, guard: usize },
    #[error("gadget construction needs r >= 3, got {r}")]
    UniformityTooSmall { r: usize },
    #[error("Assumption 1: ground set has n = {n} elements, need n >= 4r = {required}")]
    GroundSetTooSmall { n: usize, required: usize },
    #[error("Assumption 1: r - 2 = {divisor} does not divide n + 2 = {value}")]
    Divisibility { divisor: usize, value: usize },
    #[error("Assumption 1: |S_{index}| = {size} < 2r = {required}")]
    SetTooSmall { index: usize, size: usize, required: usize },
    #[error("{0} is not a valid exact cover of the instance")]
    InvalidCover(String),
    #[error("sequence is not a tight k-path of the gadget")]
    NotATightPath,
    #[error("combinatorial budget exceeded: would generate more than {budget} sets")]
    BudgetExceeded { budget: usize },
    #[error("set {index} has {size} elements, above the subset-closure bound {bound}")]
    SetAboveBound { index: usize, size: usize, bound: usize },
    #[error("gadget construction produced an invalid result: {0}")]
    Internal(String),
}

/// Replaces every undirected edge by all r! orientations; tight-path
/// existence is preserved in both directions.
pub fn expand_orientations(h: &Hypergraph, guard: usize) -> Result<Hypergraph, ReductionError> {
    if h.is_directed() {
        return Err(ReductionError::AlreadyDirected);
    }
    let r = h.uniformity();
    if r > guard {
        return Err(ReductionError::OrientationGuard { r, guard });
    }
    let mut edges = Vec::with_capacity(h.num_edges() * (1..=r).product::<usize>());
    for e in h.edges() {
        edges.extend(permutations_lex(e));
    }
    Hypergraph::new(r, h.num_vertices(), true, edges)
        .map_err(|e| ReductionError::Internal(e.to_string()))
}

/// Role of one gadget vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GadgetLabel {
    /// Shared element-node for ground-set element `element`.
    Element { element: usize },
    /// Set-node `pos` (0-based) of set `set`.
    SetNode { set: usize, pos: usize },
    XStart,
    XEnd,
    UStart,
    UEnd,
    UOpen,
    UClose,
}

impl GadgetLabel {
    pub fn is_set_node(&self) -> bool {
        matches!(
            self,
            GadgetLabel::SetNode { .. }
                | GadgetLabel::UStart
                | GadgetLabel::UEnd
                | GadgetLabel::UOpen
                | GadgetLabel::UClose
        )
    }

    pub fn is_element_node(&self) -> bool {
        matches!(
            self,
            GadgetLabel::Element { .. } | GadgetLabel::XStart | GadgetLabel::XEnd
        )
    }
}

/// Label bookkeeping for one gadget, serialized as the JSON sidecar so
/// certificates can be translated offline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetMap {
    pub r: usize,
    pub k: usize,
    pub num_elements: usize,
    /// Label of every gadget vertex, indexed by vertex id.
    pub labels: Vec<GadgetLabel>,
    /// Element id -> vertex id.
    pub element_vertex: Vec<VertexId>,
    /// Set index -> per-position vertex ids.
    pub set_node_vertex: Vec<Vec<VertexId>>,
    pub x_start: VertexId,
    pub x_end: VertexId,
    pub u_start: VertexId,
    pub u_end: VertexId,
    pub u_open: VertexId,
    pub u_close: VertexId,
}

impl GadgetMap {
    pub fn label(&self, v: VertexId) -> GadgetLabel {
        self.labels[v.index()]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("gadget map serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

fn check_assumption1(inst: &ExactCoverInstance, r: usize) -> Result<(), ReductionError> {
    if r < 3 {
        return Err(ReductionError::UniformityTooSmall { r });
    }
    let n = inst.num_elements();
    if n < 4 * r {
        return Err(ReductionError::GroundSetTooSmall { n, required: 4 * r });
    }
    if !(n + 2).is_multiple_of(r - 2) {
        return Err(ReductionError::Divisibility { divisor: r - 2, value: n + 2 });
    }
    for (index, s) in inst.sets().iter().enumerate() {
        if s.len() < 2 * r {
            return Err(ReductionError::SetTooSmall { index, size: s.len(), required: 2 * r });
        }
    }
    Ok(())
}

/// Builds the undirected k-HyperPath gadget for an Exact Cover instance
/// satisfying Assumption 1 (n >= 4r, r-2 divides n+2, every set of size
/// >= 2r; use [`pad_exc_instance`] first otherwise).
pub fn exc_to_khp(
    inst: &ExactCoverInstance,
    r: usize,
) -> Result<(Hypergraph, usize, GadgetMap), ReductionError> {
    check_assumption1(inst, r)?;
    let n = inst.num_elements();
    let sets = inst.sets();
    let k = (n + 2) * (r - 1) / (r - 2) + 1;

    // vertex layout: elements, x_start, x_end, per-set nodes, specials
    let mut labels: Vec<GadgetLabel> = Vec::new();
    let element_vertex: Vec<VertexId> = (0..n)
        .map(|e| {
            labels.push(GadgetLabel::Element { element: e });
            VertexId(e)
        })
        .collect();
    let x_start = VertexId(labels.len());
    labels.push(GadgetLabel::XStart);
    let x_end = VertexId(labels.len());
    labels.push(GadgetLabel::XEnd);
    let mut set_node_vertex: Vec<Vec<VertexId>> = Vec::with_capacity(sets.len());
    for (i, s) in sets.iter().enumerate() {
        let mut nodes = Vec::with_capacity(s.len());
        for pos in 0..s.len() {
            nodes.push(VertexId(labels.len()));
            labels.push(GadgetLabel::SetNode { set: i, pos });
        }
        set_node_vertex.push(nodes);
    }
    let u_start = VertexId(labels.len());
    labels.push(GadgetLabel::UStart);
    let u_end = VertexId(labels.len());
    labels.push(GadgetLabel::UEnd);
    let u_open = VertexId(labels.len());
    labels.push(GadgetLabel::UOpen);
    let u_close = VertexId(labels.len());
    labels.push(GadgetLabel::UClose);
    let num_vertices = labels.len();

    // x(i, j) = j-th element of S_i, u(i, j) = j-th set-node, both 1-based
    // to keep the window formulas aligned with the construction sketch.
    let x = |i: usize, j: usize| element_vertex[sets[i][j - 1]];
    let u = |i: usize, j: usize| set_node_vertex[i][j - 1];

    let mut edges: Vec<Vec<VertexId>> = Vec::new();
    let mut seen: HashSet<Vec<VertexId>> = HashSet::new();
    let mut add = |edge: Vec<VertexId>| {
        debug_assert_eq!(edge.len(), r, "gadget edge has wrong arity");
        let mut key = edge.clone();
        key.sort_unstable();
        if seen.insert(key) {
            edges.push(edge);
        }
    };
    // range helper: x(i, lo..=hi), empty when lo > hi
    let xs = |i: usize, lo: usize, hi: usize| -> Vec<VertexId> {
        (lo..=hi).map(|j| x(i, j)).collect()
    };

    for (i, s) in sets.iter().enumerate() {
        let len = s.len();
        // internal edges: a set-node either borders a block of r-2 of its
        // elements (heavy) or sits inside a run of r-1 of them (light)
        for j in 1..=(len + 2 - r) {
            let mut heavy = vec![u(i, j)];
            heavy.extend(xs(i, j, j + r - 3));
            heavy.push(u(i, j + r - 2));
            add(heavy);
            for h in 0..=(r - 3) {
                let mut light = xs(i, j, j + h);
                light.push(u(i, j + h + 1));
                light.extend(xs(i, j + h + 1, j + r - 2));
                add(light);
            }
        }
        // starting edges and the u_open windows
        let mut se1 = vec![u_start, x_start];
        se1.extend(xs(i, 1, r - 3));
        se1.push(u_open);
        add(se1);
        let mut se2 = vec![x_start];
        se2.extend(xs(i, 1, r - 2));
        se2.push(u_open);
        add(se2);
        for a in 1..=(r - 3) {
            let mut light = xs(i, a, a + r - 2);
            light.push(u_open);
            add(light);
        }
        let mut open_heavy = vec![u_open];
        open_heavy.extend(xs(i, r - 2, 2 * r - 5));
        open_heavy.push(u(i, 2 * r - 4));
        add(open_heavy);
        // ending edges and the u_close windows (mirrored)
        let mut se3 = vec![u_close];
        se3.extend(xs(i, len + 4 - r, len));
        se3.push(x_end);
        se3.push(u_end);
        add(se3);
        let mut se4 = vec![u_close];
        se4.extend(xs(i, len + 3 - r, len));
        se4.push(x_end);
        add(se4);
        for a in (len + 6 - 2 * r)..=(len + 2 - r) {
            let mut light = xs(i, a, a + r - 2);
            light.push(u_close);
            add(light);
        }
        let mut close_heavy = vec![u(i, len + 6 - 2 * r)];
        close_heavy.extend(xs(i, len + 6 - 2 * r, len + 3 - r));
        close_heavy.push(u_close);
        add(close_heavy);
    }

    // transition edges for ordered pairs i < i2 with disjoint sets
    for i in 0..sets.len() {
        for i2 in (i + 1)..sets.len() {
            let disjoint = {
                let a: HashSet<usize> = sets[i].iter().copied().collect();
                sets[i2].iter().all(|e| !a.contains(e))
            };
            if !disjoint {
                continue;
            }
            let len = sets[i].len();
            // heavy: one set-node from each side
            for j in 0..=(r - 3) {
                let mut e = vec![u(i, len - j)];
                e.extend(xs(i, len - j, len));
                e.extend(xs(i2, 1, r - 3 - j));
                e.push(u(i2, r - 2 - j));
                add(e);
            }
            // light with the set-node on the leaving side
            for j in 1..=(r - 3) {
                for h in 0..=(j - 1) {
                    let mut e = xs(i, len - j, len - j + h);
                    e.push(u(i, len - j + h + 1));
                    e.extend(xs(i, len - j + h + 1, len));
                    e.extend(xs(i2, 1, r - j - 2));
                    add(e);
                }
            }
            // light with the set-node on the entering side; h = 0 covers the
            // block-aligned crossing where u(i2, 1) leads its block
            for j in 1..=(r - 2) {
                for h in 0..=(r - 2 - j) {
                    let mut e = xs(i, len - j + 1, len);
                    e.extend(xs(i2, 1, h));
                    e.push(u(i2, h + 1));
                    e.extend(xs(i2, h + 1, r - j - 1));
                    add(e);
                }
            }
        }
    }

    let h = Hypergraph::new(r, num_vertices, false, edges)
        .map_err(|e| ReductionError::Internal(e.to_string()))?;
    let map = GadgetMap {
        r,
        k,
        num_elements: n,
        labels,
        element_vertex,
        set_node_vertex,
        x_start,
        x_end,
        u_start,
        u_end,
        u_open,
        u_close,
    };
    Ok((h, k, map))
}

/// Validates `cover` and lays out the canonical tight k-path that traverses
/// its sets in index order.
pub fn cover_to_path(
    inst: &ExactCoverInstance,
    cover: &[usize],
    map: &GadgetMap,
) -> Result<Vec<VertexId>, ReductionError> {
    let mut indices: Vec<usize> = cover.to_vec();
    indices.sort_unstable();
    indices.dedup();
    if indices.len() != cover.len() || !inst.is_exact_cover(&indices) {
        return Err(ReductionError::InvalidCover(format!("{cover:?}")));
    }
    let r = map.r;
    let n = inst.num_elements();

    // element sequence: x_start, cover elements in order, x_end
    let mut elems: Vec<VertexId> = Vec::with_capacity(n + 2);
    elems.push(map.x_start);
    // owner of each element sequence slot, as (set, 1-based position)
    let mut owner: Vec<Option<(usize, usize)>> = vec![None; n + 2];
    for &i in &indices {
        for (pos, &e) in inst.sets()[i].iter().enumerate() {
            owner[elems.len()] = Some((i, pos + 1));
            elems.push(map.element_vertex[e]);
        }
    }
    elems.push(map.x_end);

    // interleave: u_start, block 0, s_1, block 1, ..., s_{N-1}, block N-1, u_end
    let block = r - 2;
    let blocks = (n + 2) / block;
    let mut path: Vec<VertexId> = Vec::with_capacity(map.k);
    path.push(map.u_start);
    for b in 0..blocks {
        if b > 0 {
            let node = if b == 1 {
                map.u_open
            } else if b == blocks - 1 {
                map.u_close
            } else {
                let (set, pos) = owner[b * block]
                    .ok_or_else(|| ReductionError::Internal("block start unowned".into()))?;
                map.set_node_vertex[set][pos - 1]
            };
            path.push(node);
        }
        path.extend_from_slice(&elems[b * block..(b + 1) * block]);
    }
    path.push(map.u_end);

    if path.len() != map.k {
        return Err(ReductionError::Internal(format!(
            "constructed path has length {}, expected k = {}",
            path.len(),
            map.k
        )));
    }
    Ok(path)
}

/// Translates a tight k-path of the gadget back to the exact cover formed by
/// the sets whose set-nodes appear on it.
pub fn path_to_cover(
    h: &Hypergraph,
    map: &GadgetMap,
    inst: &ExactCoverInstance,
    path: &[VertexId],
) -> Result<Vec<usize>, ReductionError> {
    if path.len() != map.k || !h.is_tight_path(path) {
        return Err(ReductionError::NotATightPath);
    }
    let mut indices: Vec<usize> = path
        .iter()
        .filter_map(|&v| match map.label(v) {
            GadgetLabel::SetNode { set, .. } => Some(set),
            _ => None,
        })
        .collect();
    indices.sort_unstable();
    indices.dedup();
    if !inst.is_exact_cover(&indices) {
        return Err(ReductionError::Internal(format!(
            "path translates to {indices:?}, which is not an exact cover"
        )));
    }
    Ok(indices)
}

/// One padded instance, tagged with its size-residue parameter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaddedInstance {
    /// Residue parameter in [1, 2r]: solvable iff the original has a cover of
    /// size 2rt - ell for some positive t.
    pub ell: usize,
    pub instance: ExactCoverInstance,
}

/// The 2r padded instances produced by [`pad_exc_instance`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PaddedFamily {
    /// Number of fresh padding elements appended to the ground set.
    pub kappa: usize,
    pub instances: Vec<PaddedInstance>,
}

/// Rewrites an arbitrary Exact Cover instance into 2r instances satisfying
/// Assumption 1's set-size clause: the ground set grows by the smallest
/// kappa in [4r, 5r] with r-2 dividing n+kappa+2, instance ell adds ell
/// singletons and one block of the remaining padding, and every family is
/// closed into unions of 2r pairwise-disjoint sets. The original instance is
/// a yes iff some padded instance is a yes.
pub fn pad_exc_instance(
    inst: &ExactCoverInstance,
    r: usize,
    budget: usize,
) -> Result<PaddedFamily, ReductionError> {
    if r < 3 {
        return Err(ReductionError::UniformityTooSmall { r });
    }
    let n = inst.num_elements();
    let kappa = (4 * r..=5 * r)
        .find(|kappa| (n + kappa + 2).is_multiple_of(r - 2))
        .expect("a window of r-2 consecutive values contains every residue");
    let padded_n = n + kappa;

    let mut instances = Vec::with_capacity(2 * r);
    for ell in 1..=(2 * r) {
        let mut family: Vec<Vec<usize>> = inst.sets().to_vec();
        for s in 0..ell {
            family.push(vec![n + s]);
        }
        family.push((n + ell..padded_n).collect());

        // unions of every 2r pairwise-disjoint sets of the family
        let mut unions: Vec<Vec<usize>> = Vec::new();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut stack: Vec<usize> = Vec::with_capacity(2 * r);
        let mut used = vec![false; padded_n];
        choose_disjoint(
            &family,
            0,
            2 * r,
            &mut stack,
            &mut used,
            &mut |members: &[usize]| -> Result<(), ReductionError> {
                let mut union: Vec<usize> =
                    members.iter().flat_map(|&i| family[i].iter().copied()).collect();
                union.sort_unstable();
                if seen.insert(union.clone()) {
                    unions.push(union);
                }
                if unions.len() > budget {
                    return Err(ReductionError::BudgetExceeded { budget });
                }
                Ok(())
            },
        )?;
        let instance = ExactCoverInstance::new(padded_n, unions)
            .map_err(|e| ReductionError::Internal(e.to_string()))?;
        instances.push(PaddedInstance { ell, instance });
    }
    Ok(PaddedFamily { kappa, instances })
}

fn choose_disjoint(
    family: &[Vec<usize>],
    from: usize,
    want: usize,
    stack: &mut Vec<usize>,
    used: &mut [bool],
    emit: &mut impl FnMut(&[usize]) -> Result<(), ReductionError>,
) -> Result<(), ReductionError> {
    if want == 0 {
        return emit(stack);
    }
    if family.len().saturating_sub(from) < want {
        return Ok(());
    }
    for i in from..family.len() {
        if family[i].iter().any(|&e| used[e]) {
            continue;
        }
        family[i].iter().for_each(|&e| used[e] = true);
        stack.push(i);
        choose_disjoint(family, i + 1, want - 1, stack, used, emit)?;
        stack.pop();
        family[i].iter().for_each(|&e| used[e] = false);
    }
    Ok(())
}

/// Color-coding step: produces n·2^(2t) Exact Cover instances, each sampling
/// a uniform coloring of the sets into t colors and adding one fresh element
/// per color to all sets of that color.
///
/// If any produced instance has an exact cover, the Set Partitioning
/// instance is a yes with certainty; if the Set Partitioning instance is a
/// yes, some produced instance is a yes with high probability.
pub fn sp_to_exc_color_coding(
    inst: &SetPartitioningInstance,
    seed: u64,
    budget: usize,
) -> Result<Vec<ExactCoverInstance>, ReductionError> {
    let base = inst.base();
    let n = base.num_elements();
    let t = inst.threshold();
    let count = n.saturating_mul(1usize.checked_shl(2 * t as u32).unwrap_or(usize::MAX));
    if count > budget {
        return Err(ReductionError::BudgetExceeded { budget });
    }
    let mut out = Vec::with_capacity(count);
    for idx in 0..count {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(idx as u64 + 1);
        let sets: Vec<Vec<usize>> = base
            .sets()
            .iter()
            .map(|s| {
                let color = rng.random_range(0..t);
                let mut s2 = s.clone();
                s2.push(n + color);
                s2
            })
            .collect();
        out.push(
            ExactCoverInstance::new(n + t, sets)
                .map_err(|e| ReductionError::Internal(e.to_string()))?,
        );
    }
    Ok(out)
}

/// Result of [`sc_to_sp_subset_closure`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetClosure {
    /// Deduplicated family of all nonempty subsets of the input sets.
    pub sets: Vec<Vec<usize>>,
    /// Subsets generated before deduplication: the sum of 2^|S_i| - 1.
    pub generated: usize,
}

/// Closes a set family under nonempty subsets, so that a set cover of size
/// at most t exists iff a set partition of size at most t exists (overlaps
/// can be trimmed away subset by subset).
pub fn sc_to_sp_subset_closure(
    sets: &[Vec<usize>],
    bound: usize,
    budget: usize,
) -> Result<SubsetClosure, ReductionError> {
    let mut generated: usize = 0;
    for (index, s) in sets.iter().enumerate() {
        if s.len() > bound {
            return Err(ReductionError::SetAboveBound { index, size: s.len(), bound });
        }
        generated = generated.saturating_add((1usize << s.len()) - 1);
    }
    if generated > budget {
        return Err(ReductionError::BudgetExceeded { budget });
    }
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for s in sets {
        for mask in 1u64..(1u64 << s.len()) {
            let mut subset: Vec<usize> = (0..s.len())
                .filter(|&b| mask >> b & 1 == 1)
                .map(|b| s[b])
                .collect();
            subset.sort_unstable();
            if seen.insert(subset.clone()) {
                out.push(subset);
            }
        }
    }
    Ok(SubsetClosure { sets: out, generated })
}

/// Positions congruent to 1 mod r-1 (1-based) hold set-nodes on any gadget
/// path; everything else holds element-nodes. Used by tests and by the
/// structure-aware gadget search.
pub fn gadget_position_is_set_node(r: usize, position: usize) -> bool {
    position.is_multiple_of(r - 1)
}

/// Tight-path search specialized to gadgets: candidates must match the
/// set-node/element alternation and the path is anchored at u_start, which
/// cuts the branching enough to handle instances the generic oracle search
/// cannot. Validated against the unrestricted oracle by the acceptance
/// suite.
pub fn find_gadget_path(
    h: &Hypergraph,
    map: &GadgetMap,
) -> Result<Option<Vec<VertexId>>, ReductionError> {
    if h.num_vertices() != map.labels.len() {
        return Err(ReductionError::Internal("gadget map does not match hypergraph".into()));
    }
    let r = map.r;
    let k = map.k;
    let index = crate::hypergraph::ExtensionIndex::new(h);
    let mut used = vec![false; h.num_vertices()];
    let mut seq: Vec<VertexId> = Vec::with_capacity(k);

    fn dfs(
        map: &GadgetMap,
        index: &crate::hypergraph::ExtensionIndex,
        seq: &mut Vec<VertexId>,
        used: &mut [bool],
        k: usize,
    ) -> bool {
        if seq.len() == k {
            return true;
        }
        let r = map.r;
        let tail: Vec<VertexId> = seq[seq.len() + 1 - r..].to_vec();
        let want_set_node = gadget_position_is_set_node(r, seq.len());
        let exts: Vec<VertexId> = index
            .extensions(&tail)
            .iter()
            .copied()
            .filter(|&v| map.label(v).is_set_node() == want_set_node)
            .collect();
        for v in exts {
            if used[v.index()] {
                continue;
            }
            used[v.index()] = true;
            seq.push(v);
            if dfs(map, index, seq, used, k) {
                return true;
            }
            seq.pop();
            used[v.index()] = false;
        }
        false
    }

    // anchored start: every canonical gadget path has u_start at one end
    for e in h.edges() {
        if !e.contains(&map.u_start) {
            continue;
        }
        for perm in permutations_lex(e) {
            if perm[0] != map.u_start {
                continue;
            }
            // positions 0..r must already respect the alternation
            if !perm
                .iter()
                .enumerate()
                .all(|(p, &v)| map.label(v).is_set_node() == gadget_position_is_set_node(r, p))
            {
                continue;
            }
            seq.clear();
            seq.extend_from_slice(&perm);
            perm.iter().for_each(|v| used[v.index()] = true);
            if dfs(map, &index, &mut seq, &mut used, k) {
                return Ok(Some(seq));
            }
            perm.iter().for_each(|v| used[v.index()] = false);
        }
    }
    Ok(None)
}
