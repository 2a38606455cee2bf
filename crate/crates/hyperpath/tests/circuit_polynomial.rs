//! Symbolic cross-checks of the walk circuits.
//!
//! Circuits evaluate over any commutative ring, so evaluating over a sparse
//! multivariate polynomial ring recovers the exact monomial expansion. That
//! expansion is the independent oracle here: it is compared against brute
//! force path search and against the walk-count DP.

use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Mul};

use num_rational::Ratio;
use num_traits::{One, Zero};

use hyperpath::circuit::{build_cycle_circuit, build_path_circuit};
use hyperpath::gen::random_hypergraph;
use hyperpath::hypergraph::{Hypergraph, VertexId};
use hyperpath::oracle::{count_tight_walks, exists_tight_path_bruteforce};

/// Monomial: sorted (variable, exponent) pairs.
type Monomial = Vec<(usize, u32)>;

/// Sparse integer polynomial, used only as a test ring.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Poly {
    terms: BTreeMap<Monomial, i64>,
}

impl Poly {
    fn var(v: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![(v, 1)], 1);
        Self { terms }
    }

    fn prune(mut self) -> Self {
        self.terms.retain(|_, c| *c != 0);
        self
    }

    /// Monomials of `degree` distinct variables, each with exponent one.
    fn multilinear_terms(&self, degree: usize) -> Vec<(&Monomial, i64)> {
        self.terms
            .iter()
            .filter(|(m, _)| m.len() == degree && m.iter().all(|&(_, e)| e == 1))
            .map(|(m, &c)| (m, c))
            .collect()
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        self += rhs;
        self
    }
}

impl AddAssign for Poly {
    fn add_assign(&mut self, rhs: Poly) {
        for (m, c) in rhs.terms {
            *self.terms.entry(m).or_insert(0) += c;
        }
        self.terms.retain(|_, c| *c != 0);
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        let mut out = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let mut exps: BTreeMap<usize, u32> = ma.iter().copied().collect();
                for &(v, e) in mb {
                    *exps.entry(v).or_insert(0) += e;
                }
                let mono: Monomial = exps.into_iter().collect();
                *out.entry(mono).or_insert(0) += ca * cb;
            }
        }
        Poly { terms: out }.prune()
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Vec::new(), 1);
        Poly { terms }
    }
}

fn ids(xs: &[usize]) -> Vec<VertexId> {
    xs.iter().map(|&x| VertexId(x)).collect()
}

fn graph(r: usize, n: usize, edges: &[&[usize]]) -> Hypergraph {
    Hypergraph::new(r, n, true, edges.iter().map(|e| ids(e)).collect()).unwrap()
}

fn expand(h: &Hypergraph, k: usize, cycle: bool) -> Poly {
    let circuit =
        if cycle { build_cycle_circuit(h, k).unwrap() } else { build_path_circuit(h, k).unwrap() };
    let vars: Vec<Poly> = (0..h.num_vertices()).map(Poly::var).collect();
    circuit.evaluate(&vars).unwrap()
}

#[test]
fn two_edge_example_expands_to_one_monomial() {
    let h = graph(3, 4, &[&[0, 1, 2], &[1, 2, 3]]);
    let poly = expand(&h, 4, false);
    let expected: Monomial = vec![(0, 1), (1, 1), (2, 1), (3, 1)];
    assert_eq!(poly.terms.len(), 1);
    assert_eq!(poly.terms.get(&expected), Some(&1));
}

#[test]
fn cycle_example_counts_rotations() {
    let h = graph(3, 4, &[&[0, 1, 2], &[1, 2, 3], &[2, 3, 0], &[3, 0, 1]]);
    let poly = expand(&h, 4, true);
    let expected: Monomial = vec![(0, 1), (1, 1), (2, 1), (3, 1)];
    assert_eq!(poly.terms.get(&expected), Some(&4));
}

#[test]
fn path_only_cycle_polynomial_is_zero() {
    let h = graph(3, 4, &[&[0, 1, 2], &[1, 2, 3]]);
    assert!(expand(&h, 4, true).is_zero());
}

#[test]
fn multilinear_term_exists_iff_tight_path_exists() {
    let mut yes = 0;
    let mut no = 0;
    for seed in 0..60 {
        let r = 3 + (seed as usize % 2);
        let n = 5 + (seed as usize % 4); // n <= 8
        let m = 2 + (seed as usize * 7) % (2 * n);
        let Ok(h) = random_hypergraph(r, n, m, true, 500 + seed) else { continue };
        for k in r..=n {
            let poly = expand(&h, k, false);
            let has_multilinear = !poly.multilinear_terms(k).is_empty();
            let has_path = exists_tight_path_bruteforce(&h, k, None).unwrap().is_some();
            assert_eq!(has_multilinear, has_path, "r={r} n={n} m={m} k={k} seed={seed}");
            if has_path {
                yes += 1;
            } else {
                no += 1;
            }
        }
    }
    assert!(yes >= 20 && no >= 20, "need both outcomes: {yes} yes, {no} no");
}

#[test]
fn every_monomial_has_total_degree_k() {
    for seed in 0..10 {
        let h = random_hypergraph(3, 7, 12, true, 900 + seed).unwrap();
        for k in 3..=6 {
            let poly = expand(&h, k, false);
            for mono in poly.terms.keys() {
                let total: u32 = mono.iter().map(|&(_, e)| e).sum();
                assert_eq!(total as usize, k);
            }
        }
    }
}

#[test]
fn walk_counts_match_symbolic_coefficients() {
    // sum of all coefficients = evaluation at all-ones = number of walks
    for seed in 0..10 {
        let h = random_hypergraph(3, 6, 10, true, 700 + seed).unwrap();
        for k in 3..=6 {
            let poly = expand(&h, k, false);
            let coeff_sum: i64 = poly.terms.values().sum();
            let walks: u128 = count_tight_walks(&h, k).unwrap();
            assert_eq!(coeff_sum as u128, walks, "seed {seed} k {k}");
        }
    }
}

#[test]
fn homogeneity_over_the_rationals() {
    let h = graph(3, 5, &[&[0, 1, 2], &[1, 2, 3], &[2, 3, 4], &[1, 3, 4]]);
    for k in 3..=5 {
        let circuit = build_path_circuit(&h, k).unwrap();
        let lambda = Ratio::new(7i64, 3i64);
        let ones = vec![Ratio::from_integer(1i64); 5];
        let scaled = vec![lambda; 5];
        let at_ones: Ratio<i64> = circuit.evaluate(&ones).unwrap();
        let at_scaled: Ratio<i64> = circuit.evaluate(&scaled).unwrap();
        let mut factor = Ratio::from_integer(1i64);
        for _ in 0..k {
            factor *= lambda;
        }
        assert_eq!(at_scaled, factor * at_ones, "k = {k}");
    }
}
