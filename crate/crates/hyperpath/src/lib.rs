//! Tight k-path and k-cycle detection in r-uniform hypergraphs.
//!
//! The randomized solver builds the tight-walk polynomial as a skew
//! arithmetic circuit and tests it for a degree-k multilinear monomial over
//! the group algebra GF(2^l)[Z_2^k]: monomials with repeated vertices vanish
//! in characteristic 2, so a nonzero evaluation certifies a tight path. The
//! crate also ships exact brute-force oracles, the reduction pipeline from
//! Set Partitioning through Exact Cover to k-HyperPath with certificate
//! translation in both directions, seeded instance generators, and a scaling
//! benchmark.
//!
//! Core arithmetic is generic: circuits evaluate over any commutative ring
//! (`u128` for walk counts, rationals in tests, the group algebra for
//! detection), and the fingerprinting field is any [`field::BinaryField`].

pub mod algebra;
pub mod bench;
pub mod circuit;
pub mod field;
pub mod gen;
pub mod hypergraph;
pub mod oracle;
pub mod reductions;
pub mod solver;

pub use algebra::{detect_multilinear, detection_stats, DetectionParams};
pub use circuit::{build_cycle_circuit, build_path_circuit, Circuit};
pub use field::{BinaryField, Gf16, Gf32, Gf8};
pub use hypergraph::{Hypergraph, VertexId, VertexSequence};
pub use oracle::{ExactCoverInstance, SetPartitioningInstance};
pub use solver::{extract_witness, solve_k_hypercycle, solve_k_hyperpath, Decision};

/// Group algebra elements over each supported field.
pub type GroupAlgebra8 = algebra::GroupAlgebraElement<Gf8>;
pub type GroupAlgebra16 = algebra::GroupAlgebraElement<Gf16>;
pub type GroupAlgebra32 = algebra::GroupAlgebraElement<Gf32>;
