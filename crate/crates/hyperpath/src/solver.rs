//! Decision procedures for k-HyperPath and k-HyperCycle, plus witness
//! extraction by self-reduction.

use thiserror::Error;

use crate::algebra::{detect_multilinear, DetectionError, DetectionParams};
use crate::circuit::{build_cycle_circuit, build_path_circuit, CircuitError};
use crate::hypergraph::{Hypergraph, VertexId};
use crate::oracle::{exists_tight_path_bruteforce, OracleError};
use crate::reductions::{expand_orientations, ReductionError, DEFAULT_ORIENTATION_GUARD};

/// Lower bound on the probability that all k random vectors over GF(2)^k are
/// linearly independent: the infinite product of (1 - 2^-j).
const INDEPENDENCE_FLOOR: f64 = 0.288_788_095_086;

/// Answer of a randomized solve.
///
/// A yes is exact. A no is wrong with probability at most
/// `false_negative_bound`, computed as (1 - p)^R from the documented
/// per-trial floor p; a bound of zero marks an exact no (either k exceeds the
/// vertex count or the walk polynomial is identically zero).
#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    pub answer: bool,
    pub trials_used: u32,
    pub params: DetectionParams,
    pub false_negative_bound: Option<f64>,
    /// Set when an undirected input was expanded to all edge orientations.
    pub expanded_orientations: bool,
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("k = {k} is below the uniformity r = {r}")]
    KTooSmall { k: usize, r: usize },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Detection(#[from] DetectionError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("witness extraction failed after {retries} retries (surviving set of {survivors} vertices)")]
    WitnessRetriesExhausted { retries: u32, survivors: usize },
}

/// Per-trial success floor for a yes-instance: the vectors of one witness
/// must be independent, and the random scalars must keep its coefficient
/// polynomial nonzero (degree below 2k over at least 2^l - 1 values).
pub fn per_trial_floor(k: usize, field_degree: u32) -> f64 {
    let field = (1u64 << field_degree) as f64 - 1.0;
    (INDEPENDENCE_FLOOR * (1.0 - (2 * k) as f64 / field)).max(0.0)
}

fn no_decision(params: &DetectionParams, trials: u32, bound: f64, expanded: bool) -> Decision {
    Decision {
        answer: false,
        trials_used: trials,
        params: *params,
        false_negative_bound: Some(bound),
        expanded_orientations: expanded,
    }
}

enum Kind {
    Path,
    Cycle,
}

fn solve(
    h: &Hypergraph,
    k: usize,
    params: &DetectionParams,
    kind: Kind,
) -> Result<Decision, SolveError> {
    let r = h.uniformity();
    if k < r {
        return Err(SolveError::KTooSmall { k, r });
    }
    let expanded;
    let directed: std::borrow::Cow<'_, Hypergraph> = if h.is_directed() {
        expanded = false;
        std::borrow::Cow::Borrowed(h)
    } else {
        expanded = true;
        std::borrow::Cow::Owned(expand_orientations(h, DEFAULT_ORIENTATION_GUARD)?)
    };
    if k > h.num_vertices() {
        // more vertices than exist: an exact no
        return Ok(no_decision(params, 0, 0.0, expanded));
    }
    params.validate(k)?;
    let circuit = match kind {
        Kind::Path => build_path_circuit(&directed, k)?,
        Kind::Cycle => build_cycle_circuit(&directed, k)?,
    };
    if circuit.is_identically_zero() {
        // no tight walks at all, let alone paths: an exact no
        return Ok(no_decision(params, 0, 0.0, expanded));
    }
    let detection = detect_multilinear(&circuit, params)?;
    if detection.found {
        Ok(Decision {
            answer: true,
            trials_used: detection.trials_used,
            params: *params,
            false_negative_bound: None,
            expanded_orientations: expanded,
        })
    } else {
        let p = per_trial_floor(k, params.field_degree);
        let bound = (1.0 - p).powi(params.repetitions as i32);
        Ok(no_decision(params, detection.trials_used, bound, expanded))
    }
}

/// Decides whether `h` contains a tight path on k distinct vertices.
pub fn solve_k_hyperpath(
    h: &Hypergraph,
    k: usize,
    params: &DetectionParams,
) -> Result<Decision, SolveError> {
    solve(h, k, params, Kind::Path)
}

/// Decides whether `h` contains a tight cycle on k distinct vertices.
pub fn solve_k_hypercycle(
    h: &Hypergraph,
    k: usize,
    params: &DetectionParams,
) -> Result<Decision, SolveError> {
    solve(h, k, params, Kind::Cycle)
}

/// Extracts a tight k-path witness by iterative vertex deletion.
///
/// Vertices are deleted greedily (with the solver re-run at triple the
/// repetition count, since a pass makes n dependent calls); a deletion is
/// kept only when the solver still answers yes, and yes answers are exact, so
/// deletions are always safe. With no false negatives the surviving set is
/// exactly the k vertices of one witness, which a brute-force search then
/// orders. A false negative only leaves extra survivors; if too many remain
/// the pass is retried with a fresh seed.
pub fn extract_witness(
    h: &Hypergraph,
    k: usize,
    params: &DetectionParams,
) -> Result<Option<Vec<VertexId>>, SolveError> {
    let initial = solve_k_hyperpath(h, k, params)?;
    if !initial.answer {
        return Ok(None);
    }
    let directed: std::borrow::Cow<'_, Hypergraph> = if h.is_directed() {
        std::borrow::Cow::Borrowed(h)
    } else {
        std::borrow::Cow::Owned(expand_orientations(h, DEFAULT_ORIENTATION_GUARD)?)
    };

    const RETRIES: u32 = 3;
    // plenty of headroom over k: false negatives during deletion are rare
    let survivor_slack = 8;
    for retry in 0..RETRIES {
        let amplified = DetectionParams {
            repetitions: params.repetitions * 3,
            seed: params.seed.wrapping_add(retry as u64 * 0x9E37_79B9),
            ..*params
        };
        let mut alive = vec![true; directed.num_vertices()];
        for v in 0..directed.num_vertices() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            let sub = restrict(&directed, &alive);
            let keep_deleted = match solve_k_hyperpath(&sub, k, &amplified) {
                Ok(d) => d.answer,
                Err(SolveError::KTooSmall { .. }) => false,
                Err(e) => return Err(e),
            };
            if !keep_deleted {
                alive[v] = true;
            }
        }
        let survivors = alive.iter().filter(|&&a| a).count();
        if survivors <= k + survivor_slack {
            let sub = restrict(&directed, &alive);
            let witness =
                exists_tight_path_bruteforce(&sub, k, Some(sub.num_vertices()))?;
            if let Some(w) = witness {
                debug_assert!(h.is_tight_path(&w));
                return Ok(Some(w));
            }
            // a false no during deletion removed too much context; retry
        }
    }
    Err(SolveError::WitnessRetriesExhausted {
        retries: RETRIES,
        survivors: h.num_vertices(),
    })
}

/// Same vertex set, keeping only edges whose vertices are all alive.
fn restrict(h: &Hypergraph, alive: &[bool]) -> Hypergraph {
    let edges: Vec<Vec<VertexId>> = h
        .edges()
        .iter()
        .filter(|e| e.iter().all(|v| alive[v.index()]))
        .cloned()
        .collect();
    Hypergraph::new(h.uniformity(), h.num_vertices(), h.is_directed(), edges)
        .expect("restriction preserves validity")
}
