//! The group algebra GF(2^l)[Z_2^k] and randomized multilinear-monomial
//! detection for skew circuits.
//!
//! An element is a vector of 2^k field coefficients indexed by the group
//! elements (k-bit vectors under XOR). Substituting x_i -> y_i·(e + z_{v_i})
//! kills every monomial with a repeated variable, because (e + z_v)^2 = 0 in
//! characteristic 2, while a multilinear monomial survives with noticeable
//! probability when the vectors v_i are linearly independent.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::circuit::{Circuit, Gate};
use crate::field::{random_nonzero, BinaryField, Gf16, Gf32, Gf8, SUPPORTED_DEGREES};

/// One element of GF(2^l)[Z_2^k].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAlgebraElement<F: BinaryField> {
    dimension: u32,
    coeffs: Vec<F>,
}

impl<F: BinaryField> GroupAlgebraElement<F> {
    pub fn zero(dimension: u32) -> Self {
        Self { dimension, coeffs: vec![F::ZERO; 1usize << dimension] }
    }

    /// The group identity: coefficient 1 on the zero vector.
    pub fn identity(dimension: u32) -> Self {
        let mut e = Self::zero(dimension);
        e.coeffs[0] = F::ONE;
        e
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, group_element: u64) -> F {
        self.coeffs[group_element as usize]
    }

    pub fn set_coeff(&mut self, group_element: u64, value: F) {
        self.coeffs[group_element as usize] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn reset_zero(&mut self) {
        self.coeffs.iter_mut().for_each(|c| *c = F::ZERO);
    }

    /// Coefficient-wise addition (XOR in characteristic 2).
    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.dimension, other.dimension, "group algebra dimension mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a = a.add(*b);
        }
    }

    /// Multiplication by the substituted input y·(e + z_v):
    /// out[w] = y·(a[w] + a[w XOR v]). Θ(2^k) field operations.
    pub fn shift_mul(&self, v: u64, y: F) -> Self {
        let mut out = Self::zero(self.dimension);
        self.shift_mul_into(v, y, &mut out);
        out
    }

    /// As [`Self::shift_mul`], writing into an existing buffer.
    pub fn shift_mul_into(&self, v: u64, y: F, out: &mut Self) {
        assert_eq!(self.dimension, out.dimension);
        let v = v as usize;
        debug_assert!(v < self.coeffs.len());
        if v == 0 {
            // y·(a[w] + a[w]) = 0: (e + z_0) is the zero divisor 2e = 0
            out.coeffs.iter_mut().for_each(|c| *c = F::ZERO);
            return;
        }
        for w in 0..self.coeffs.len() {
            out.coeffs[w] = y.mul(self.coeffs[w].add(self.coeffs[w ^ v]));
        }
    }

    /// Full product by XOR-convolution: Θ(4^k) field operations. Intended
    /// for tests at small k; the evaluator itself only needs skew products.
    pub fn mul_naive(&self, other: &Self) -> Self {
        assert_eq!(self.dimension, other.dimension);
        assert!(self.dimension <= 12, "naive product is for tiny dimensions only");
        let mut out = Self::zero(self.dimension);
        for (a_idx, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (b_idx, &b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let w = a_idx ^ b_idx;
                out.coeffs[w] = out.coeffs[w].add(a.mul(b));
            }
        }
        out
    }

    /// The substituted input value y·(e + z_v) itself.
    pub fn substituted_input(dimension: u32, v: u64, y: F) -> Self {
        let mut out = Self::zero(dimension);
        out.coeffs[0] = out.coeffs[0].add(y);
        out.coeffs[v as usize] = out.coeffs[v as usize].add(y);
        out
    }
}

/// Knobs for the randomized detection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct DetectionParams {
    /// Field degree l of GF(2^l); one of 8, 16, 32.
    pub field_degree: u32,
    /// Number of independent trials R.
    pub repetitions: u32,
    /// Seed; trial t uses the ChaCha stream (seed, t), so trials are
    /// order-independent.
    pub seed: u64,
    /// Upper bound on k; one algebra element takes 2^k·l bits.
    pub max_dimension: u32,
}

impl Default for DetectionParams {
    fn default() -> Self {
        Self { field_degree: 16, repetitions: 20, seed: 1, max_dimension: 24 }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DetectionError {
    #[error("unsupported field degree {0}; supported: 8, 16, 32")]
    UnsupportedFieldDegree(u32),
    #[error("repetitions must be at least 1")]
    NoRepetitions,
    #[error("degree k = {k} exceeds the memory guard {guard} (one element is 2^k·l bits)")]
    DimensionGuard { k: usize, guard: u32 },
    #[error("field degree {degree} is too small for k = {k}: need 2^l >= 4k")]
    FieldTooSmall { degree: u32, k: usize },
}

impl DetectionParams {
    pub fn validate(&self, k: usize) -> Result<(), DetectionError> {
        if !SUPPORTED_DEGREES.contains(&self.field_degree) {
            return Err(DetectionError::UnsupportedFieldDegree(self.field_degree));
        }
        if self.repetitions == 0 {
            return Err(DetectionError::NoRepetitions);
        }
        if k > self.max_dimension as usize {
            return Err(DetectionError::DimensionGuard { k, guard: self.max_dimension });
        }
        if (1u64 << self.field_degree) < 4 * k as u64 {
            return Err(DetectionError::FieldTooSmall { degree: self.field_degree, k });
        }
        Ok(())
    }

    fn trial_rng(&self, trial: u32) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial as u64 + 1);
        rng
    }
}

/// Outcome of [`detect_multilinear`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Detection {
    /// True iff some trial evaluated to a nonzero algebra element. A yes is
    /// always correct; a no is wrong with probability at most (1-p)^R.
    pub found: bool,
    pub trials_used: u32,
}

/// Per-trial statistics from [`detection_stats`]; all trials are run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DetectionStats {
    pub yes_trials: u32,
    pub trials: u32,
}

/// Randomized test for a degree-k multilinear monomial in the circuit's
/// output polynomial.
///
/// Each trial draws, per variable, a uniform k-bit vector and a uniform
/// nonzero field scalar, plus a fresh nonzero scalar per product gate, and
/// evaluates the circuit over the group algebra. Monomials with a repeated
/// variable vanish identically, so "yes" answers are exact. The per-gate
/// scalars keep distinct walks on the same vertex set from cancelling each
/// other modulo 2 (distinct walks pass distinct gate sets, so their weights
/// are distinct monomials in the random scalars).
///
/// Trials stop at the first yes.
pub fn detect_multilinear(
    circuit: &Circuit,
    params: &DetectionParams,
) -> Result<Detection, DetectionError> {
    params.validate(circuit.degree())?;
    dispatch(params.field_degree, circuit, params, true).map(|s| Detection {
        found: s.yes_trials > 0,
        trials_used: s.trials,
    })
}

/// Runs every trial (no early exit) and reports how many answered yes.
pub fn detection_stats(
    circuit: &Circuit,
    params: &DetectionParams,
) -> Result<DetectionStats, DetectionError> {
    params.validate(circuit.degree())?;
    dispatch(params.field_degree, circuit, params, false)
}

fn dispatch(
    degree: u32,
    circuit: &Circuit,
    params: &DetectionParams,
    early_exit: bool,
) -> Result<DetectionStats, DetectionError> {
    match degree {
        8 => Ok(run_trials::<Gf8>(circuit, params, early_exit)),
        16 => Ok(run_trials::<Gf16>(circuit, params, early_exit)),
        32 => Ok(run_trials::<Gf32>(circuit, params, early_exit)),
        other => Err(DetectionError::UnsupportedFieldDegree(other)),
    }
}

fn run_trials<F: BinaryField>(
    circuit: &Circuit,
    params: &DetectionParams,
    early_exit: bool,
) -> DetectionStats {
    let mut yes = 0;
    let mut trials = 0;
    // buffers live across trials; every trial allocates at most a handful
    let mut pool: Vec<GroupAlgebraElement<F>> = Vec::new();
    for trial in 0..params.repetitions {
        trials += 1;
        let mut rng = params.trial_rng(trial);
        if run_trial::<F>(circuit, &mut rng, &mut pool) {
            yes += 1;
            if early_exit {
                break;
            }
        }
    }
    DetectionStats { yes_trials: yes, trials }
}

/// One detection trial: true iff the algebra evaluation is nonzero.
fn run_trial<F: BinaryField>(
    circuit: &Circuit,
    rng: &mut ChaCha8Rng,
    pool: &mut Vec<GroupAlgebraElement<F>>,
) -> bool {
    let k = circuit.degree() as u32;
    let dim_mask = (1u64 << k) - 1;

    // Per-variable draws, in vertex order for reproducibility.
    let mut vectors = Vec::with_capacity(circuit.num_vars());
    let mut scalars: Vec<F> = Vec::with_capacity(circuit.num_vars());
    for _ in 0..circuit.num_vars() {
        vectors.push(rng.random_range(0..=dim_mask));
        scalars.push(random_nonzero::<F, _>(rng));
    }
    // Per-product-gate weights, in gate order.
    let weights: Vec<F> = circuit
        .gates()
        .iter()
        .map(|g| match g {
            Gate::MulByInput(..) => random_nonzero::<F, _>(rng),
            _ => F::ONE,
        })
        .collect();

    // Liveness-driven evaluation: a value is dropped (and its buffer reused)
    // once its last consumer has read it, which for the layered walk circuits
    // keeps about two recurrence layers of elements alive.
    let mut remaining = circuit.consumer_counts();
    let mut values: Vec<Option<GroupAlgebraElement<F>>> = vec![None; circuit.gate_count()];
    // stale pool entries (from a circuit of another degree) are discarded
    pool.retain(|e| e.dimension() == k);

    fn take<F: BinaryField>(
        values: &mut [Option<GroupAlgebraElement<F>>],
        remaining: &mut [u32],
        pool: &mut Vec<GroupAlgebraElement<F>>,
        op: usize,
    ) -> GroupAlgebraElement<F> {
        remaining[op] -= 1;
        if remaining[op] == 0 {
            values[op].take().expect("operand value alive")
        } else {
            let template = values[op].as_ref().expect("operand value alive");
            match pool.pop() {
                Some(mut buf) => {
                    buf.coeffs.copy_from_slice(&template.coeffs);
                    buf
                }
                None => template.clone(),
            }
        }
    }
    let fresh = |pool: &mut Vec<GroupAlgebraElement<F>>| -> GroupAlgebraElement<F> {
        match pool.pop() {
            Some(mut buf) => {
                buf.reset_zero();
                buf
            }
            None => GroupAlgebraElement::zero(k),
        }
    };

    for (id, gate) in circuit.gates().iter().enumerate() {
        if remaining[id] == 0 {
            continue; // dead gate, nothing reads it
        }
        let value = match gate {
            Gate::Zero => fresh(pool),
            Gate::One => {
                let mut e = fresh(pool);
                e.set_coeff(0, F::ONE);
                e
            }
            Gate::Input(v) => {
                let mut e = fresh(pool);
                let y = scalars[v.index()];
                e.set_coeff(0, y);
                let vec = vectors[v.index()];
                e.set_coeff(vec, e.coeff(vec).add(y));
                e
            }
            Gate::MulByInput(op, v) => {
                let y = scalars[v.index()].mul(weights[id]);
                let operand = take(&mut values, &mut remaining, pool, *op);
                let mut out = fresh(pool);
                operand.shift_mul_into(vectors[v.index()], y, &mut out);
                pool.push(operand);
                out
            }
            Gate::Add(ops) => {
                let mut acc = take(&mut values, &mut remaining, pool, ops[0]);
                for &op in &ops[1..] {
                    let rhs = take(&mut values, &mut remaining, pool, op);
                    acc.add_assign(&rhs);
                    pool.push(rhs);
                }
                acc
            }
        };
        values[id] = Some(value);
    }

    let found = values[circuit.output()].as_ref().is_some_and(|v| !v.is_zero());
    // return every surviving buffer for the next trial
    pool.extend(values.into_iter().flatten());
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::build_path_circuit;
    use crate::hypergraph::{Hypergraph, VertexId};

    type Ga = GroupAlgebraElement<Gf16>;

    fn ids(xs: &[usize]) -> Vec<VertexId> {
        xs.iter().map(|&x| VertexId(x)).collect()
    }

    #[test]
    fn add_is_characteristic_two() {
        let mut a = Ga::identity(3);
        a.set_coeff(5, Gf16(0xAB));
        let mut twice = a.clone();
        twice.add_assign(&a);
        assert!(twice.is_zero());
        let mut with_zero = a.clone();
        with_zero.add_assign(&Ga::zero(3));
        assert_eq!(with_zero, a);
    }

    #[test]
    fn shift_mul_formula_small_case() {
        // k = 2, A = [a, b, c, d] indexed 00,01,10,11; v = 01, y = 1
        let (a, b, c, d) = (Gf16(3), Gf16(9), Gf16(17), Gf16(40));
        let mut x = Ga::zero(2);
        x.set_coeff(0b00, a);
        x.set_coeff(0b01, b);
        x.set_coeff(0b10, c);
        x.set_coeff(0b11, d);
        let out = x.shift_mul(0b01, Gf16::ONE);
        assert_eq!(out.coeff(0b00), a.add(b));
        assert_eq!(out.coeff(0b01), a.add(b));
        assert_eq!(out.coeff(0b10), c.add(d));
        assert_eq!(out.coeff(0b11), c.add(d));
    }

    #[test]
    fn shift_by_zero_vector_vanishes() {
        let mut x = Ga::identity(3);
        x.set_coeff(4, Gf16(7));
        assert!(x.shift_mul(0, Gf16(0x99)).is_zero());
    }

    #[test]
    fn squares_of_substituted_inputs_vanish() {
        // (e + z_v)^2 = 0: exhaustive over all v for k <= 4
        for k in 1..=4u32 {
            for v in 0..(1u64 << k) {
                let sub = Ga::substituted_input(k, v, Gf16::ONE);
                let prod = sub.shift_mul(v, Gf16::ONE);
                assert!(prod.is_zero(), "k = {k}, v = {v}");
            }
        }
    }

    #[test]
    fn shift_mul_matches_naive_product() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in 1..=6u32 {
            for _ in 0..20 {
                let mut a = Ga::zero(k);
                for w in 0..(1usize << k) {
                    a.set_coeff(w as u64, Gf16(rng.random()));
                }
                let v = rng.random_range(0..(1u64 << k));
                let y = random_nonzero::<Gf16, _>(&mut rng);
                let sub = Ga::substituted_input(k, v, y);
                assert_eq!(a.shift_mul(v, y), a.mul_naive(&sub), "k = {k}, v = {v}");
            }
        }
    }

    #[test]
    fn independent_vectors_give_nonzero_products() {
        // hand-picked independent vectors for k <= 4
        for k in 1..=4u32 {
            let mut acc = Ga::identity(k);
            for bit in 0..k {
                acc = acc.shift_mul(1 << bit, Gf16::ONE);
            }
            assert!(!acc.is_zero(), "k = {k}");
        }
    }

    fn path_params(seed: u64) -> DetectionParams {
        DetectionParams { seed, repetitions: 20, ..DetectionParams::default() }
    }

    #[test]
    fn detects_existing_path() {
        let h = Hypergraph::new(3, 4, true, vec![ids(&[0, 1, 2]), ids(&[1, 2, 3])]).unwrap();
        let c = build_path_circuit(&h, 4).unwrap();
        let d = detect_multilinear(&c, &path_params(42)).unwrap();
        assert!(d.found);
    }

    #[test]
    fn never_detects_on_zero_polynomial() {
        let h = Hypergraph::new(3, 4, true, vec![ids(&[0, 1, 2])]).unwrap();
        let c = build_path_circuit(&h, 4).unwrap();
        for seed in 0..10 {
            let d = detect_multilinear(&c, &path_params(seed)).unwrap();
            assert!(!d.found, "seed {seed}");
        }
    }

    #[test]
    fn squares_never_detected() {
        // hand-built circuit for the single monomial x0^2·x1
        use crate::circuit::{Circuit, Gate};
        let gates = vec![
            Gate::Input(VertexId(0)),
            Gate::MulByInput(0, VertexId(0)),
            Gate::MulByInput(1, VertexId(1)),
        ];
        let c = Circuit::new(gates, 2, 3, 2).unwrap();
        for seed in 0..20 {
            let d = detect_multilinear(&c, &path_params(seed)).unwrap();
            assert!(!d.found, "seed {seed}");
        }
    }

    #[test]
    fn stats_run_all_trials() {
        let h = Hypergraph::new(3, 4, true, vec![ids(&[0, 1, 2]), ids(&[1, 2, 3])]).unwrap();
        let c = build_path_circuit(&h, 4).unwrap();
        let params = DetectionParams { repetitions: 50, seed: 3, ..DetectionParams::default() };
        let stats = detection_stats(&c, &params).unwrap();
        assert_eq!(stats.trials, 50);
        assert!(stats.yes_trials > 5, "yes rate suspiciously low: {}", stats.yes_trials);
        assert!(stats.yes_trials < 50, "cancellation-free trials should miss sometimes");
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let h = Hypergraph::new(3, 5, true, vec![ids(&[0, 1, 2]), ids(&[1, 2, 3]), ids(&[2, 3, 4])])
            .unwrap();
        let c = build_path_circuit(&h, 5).unwrap();
        let params = path_params(77);
        let a = detection_stats(&c, &params).unwrap();
        let b = detection_stats(&c, &params).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn params_validation() {
        let p = DetectionParams::default();
        assert!(p.validate(10).is_ok());
        assert!(matches!(
            DetectionParams { field_degree: 12, ..p }.validate(4),
            Err(DetectionError::UnsupportedFieldDegree(12))
        ));
        assert!(matches!(
            DetectionParams { repetitions: 0, ..p }.validate(4),
            Err(DetectionError::NoRepetitions)
        ));
        assert!(matches!(
            p.validate(30),
            Err(DetectionError::DimensionGuard { k: 30, guard: 24 })
        ));
        assert!(matches!(
            DetectionParams { field_degree: 8, ..p }.validate(100),
            Err(DetectionError::DimensionGuard { .. })
        ));
        let roomy = DetectionParams { field_degree: 8, max_dimension: 80, ..p };
        assert!(matches!(roomy.validate(70), Err(DetectionError::FieldTooSmall { .. })));
    }
}
