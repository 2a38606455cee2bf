//! Seeded instance generators. The same seed always produces the same
//! instance.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::hypergraph::{Hypergraph, VertexId};
use crate::oracle::ExactCoverInstance;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("cannot place {m} distinct edges: only {max} exist for r = {r}, n = {n}")]
    TooManyEdges { m: usize, max: u128, r: usize, n: usize },
    #[error("need n >= {required}, got {n}")]
    TooFewVertices { n: usize, required: usize },
    #[error("set size range {lo}..={hi} is invalid for n = {n}")]
    BadSizeRange { lo: usize, hi: usize, n: usize },
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Number of possible distinct edges, saturating.
fn max_edges(r: usize, n: usize, directed: bool) -> u128 {
    if n < r {
        return 0;
    }
    let mut binom: u128 = 1;
    for i in 0..r {
        binom = binom.saturating_mul((n - i) as u128);
    }
    if directed {
        binom // n·(n-1)···(n-r+1) ordered sequences
    } else {
        let mut fact: u128 = 1;
        for i in 1..=r {
            fact *= i as u128;
        }
        binom / fact
    }
}

/// Uniform random r-uniform hypergraph with m distinct edges.
pub fn random_hypergraph(
    r: usize,
    n: usize,
    m: usize,
    directed: bool,
    seed: u64,
) -> Result<Hypergraph, GenError> {
    let max = max_edges(r, n, directed);
    if (m as u128) > max {
        return Err(GenError::TooManyEdges { m, max, r, n });
    }
    let mut rng = rng_for(seed);
    let mut seen: HashSet<Vec<VertexId>> = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let mut edge = Vec::with_capacity(r);
        while edge.len() < r {
            let v = VertexId(rng.random_range(0..n));
            if !edge.contains(&v) {
                edge.push(v);
            }
        }
        let mut key = edge.clone();
        if !directed {
            key.sort_unstable();
        }
        if seen.insert(key.clone()) {
            edges.push(if directed { edge } else { key });
        }
    }
    Ok(Hypergraph::new(r, n, directed, edges).expect("generated edges are valid"))
}

/// Directed hypergraph containing a planted tight k-path plus `extra_edges`
/// random noise edges. Returns the planted vertex sequence alongside.
pub fn planted_path(
    r: usize,
    n: usize,
    k: usize,
    extra_edges: usize,
    seed: u64,
) -> Result<(Hypergraph, Vec<VertexId>), GenError> {
    if n < k || k < r {
        return Err(GenError::TooFewVertices { n, required: k.max(r) });
    }
    let mut rng = rng_for(seed);
    let mut vertices: Vec<VertexId> = (0..n).map(VertexId).collect();
    vertices.shuffle(&mut rng);
    let plant: Vec<VertexId> = vertices[..k].to_vec();

    let mut seen: HashSet<Vec<VertexId>> = HashSet::new();
    let mut edges = Vec::new();
    for w in plant.windows(r) {
        if seen.insert(w.to_vec()) {
            edges.push(w.to_vec());
        }
    }
    let max = max_edges(r, n, true);
    let want = edges.len() + extra_edges;
    if (want as u128) > max {
        return Err(GenError::TooManyEdges { m: want, max, r, n });
    }
    while edges.len() < want {
        let mut edge = Vec::with_capacity(r);
        while edge.len() < r {
            let v = VertexId(rng.random_range(0..n));
            if !edge.contains(&v) {
                edge.push(v);
            }
        }
        if seen.insert(edge.clone()) {
            edges.push(edge);
        }
    }
    let h = Hypergraph::new(r, n, true, edges).expect("generated edges are valid");
    Ok((h, plant))
}

/// Directed hypergraph containing a planted tight k-cycle (all k cyclic
/// windows of a random k-sequence) plus noise edges.
pub fn planted_cycle(
    r: usize,
    n: usize,
    k: usize,
    extra_edges: usize,
    seed: u64,
) -> Result<(Hypergraph, Vec<VertexId>), GenError> {
    if n < k || k < r {
        return Err(GenError::TooFewVertices { n, required: k.max(r) });
    }
    let mut rng = rng_for(seed.wrapping_add(0x5EED));
    let mut vertices: Vec<VertexId> = (0..n).map(VertexId).collect();
    vertices.shuffle(&mut rng);
    let plant: Vec<VertexId> = vertices[..k].to_vec();

    let mut seen: HashSet<Vec<VertexId>> = HashSet::new();
    let mut edges = Vec::new();
    for start in 0..k {
        let window: Vec<VertexId> = (0..r).map(|j| plant[(start + j) % k]).collect();
        if seen.insert(window.clone()) {
            edges.push(window);
        }
    }
    let max = max_edges(r, n, true);
    let want = edges.len() + extra_edges;
    if (want as u128) > max {
        return Err(GenError::TooManyEdges { m: want, max, r, n });
    }
    while edges.len() < want {
        let mut edge = Vec::with_capacity(r);
        while edge.len() < r {
            let v = VertexId(rng.random_range(0..n));
            if !edge.contains(&v) {
                edge.push(v);
            }
        }
        if seen.insert(edge.clone()) {
            edges.push(edge);
        }
    }
    let h = Hypergraph::new(r, n, true, edges).expect("generated edges are valid");
    Ok((h, plant))
}

/// Random Exact Cover instance: m sets with sizes drawn from
/// `size_lo..=size_hi`.
pub fn random_exc(
    n: usize,
    m: usize,
    size_lo: usize,
    size_hi: usize,
    seed: u64,
) -> Result<ExactCoverInstance, GenError> {
    if size_lo == 0 || size_lo > size_hi || size_hi > n {
        return Err(GenError::BadSizeRange { lo: size_lo, hi: size_hi, n });
    }
    let mut rng = rng_for(seed);
    let mut sets = Vec::with_capacity(m);
    let all: Vec<usize> = (0..n).collect();
    for _ in 0..m {
        let size = rng.random_range(size_lo..=size_hi);
        let mut pool = all.clone();
        pool.shuffle(&mut rng);
        pool.truncate(size);
        sets.push(pool);
    }
    Ok(ExactCoverInstance::new(n, sets).expect("generated sets are valid"))
}

/// Exact Cover instance built around a planted partition into sets of size
/// at least `min_size` (so it is a yes-instance), plus noise sets.
pub fn planted_partition_exc(
    n: usize,
    min_size: usize,
    noise_sets: usize,
    seed: u64,
) -> Result<ExactCoverInstance, GenError> {
    if min_size == 0 || min_size > n {
        return Err(GenError::BadSizeRange { lo: min_size, hi: min_size, n });
    }
    let mut rng = rng_for(seed);
    let mut elems: Vec<usize> = (0..n).collect();
    elems.shuffle(&mut rng);
    let mut sets = Vec::new();
    let mut pos = 0;
    while pos < n {
        let remaining = n - pos;
        if remaining < 2 * min_size {
            sets.push(elems[pos..].to_vec());
            pos = n;
        } else {
            let hi = (remaining - min_size).min(min_size + min_size / 2 + 1);
            let size = rng.random_range(min_size..=hi.max(min_size));
            sets.push(elems[pos..pos + size].to_vec());
            pos += size;
        }
    }
    for _ in 0..noise_sets {
        let size = rng.random_range(min_size..=(2 * min_size).min(n));
        let mut pool: Vec<usize> = (0..n).collect();
        pool.shuffle(&mut rng);
        pool.truncate(size);
        sets.push(pool);
    }
    sets.shuffle(&mut rng);
    Ok(ExactCoverInstance::new(n, sets).expect("generated sets are valid"))
}
