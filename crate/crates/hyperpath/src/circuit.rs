//! Skew arithmetic circuits for the tight-walk polynomial.
//!
//! The walk polynomial sums, over every length-k tight walk, the product of
//! the walk's vertex variables. It is built from a recurrence over labels
//! (last window, length): a walk of length t+1 ending with window `e` is a
//! walk of length t ending with a predecessor window, extended by `e`'s last
//! vertex. Every product gate multiplies a previous gate by an input
//! variable, so the circuit is skew by construction.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::ops::{AddAssign, Mul};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::hypergraph::{Hypergraph, VertexId};

/// Index of a gate within its circuit; operands always reference smaller ids.
pub type GateId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gate {
    /// The input variable of one vertex.
    Input(VertexId),
    /// Sum of previously defined gates (unbounded fan-in).
    Add(Vec<GateId>),
    /// Product of a previously defined gate with an input variable — the
    /// only product form (skew circuit).
    MulByInput(GateId, VertexId),
    Zero,
    One,
}

/// A homogeneous degree-k skew circuit in topological order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    gates: Vec<Gate>,
    output: GateId,
    degree: usize,
    num_vars: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CircuitError {
    #[error("k = {k} is below the uniformity r = {r}")]
    KTooSmall { k: usize, r: usize },
    #[error("circuit construction needs a directed hypergraph; expand orientations first")]
    UndirectedInput,
    #[error("gate {gate} references operand {operand} that is not defined before it")]
    OperandOrder { gate: GateId, operand: GateId },
    #[error("no assignment for variable {0}")]
    MissingAssignment(VertexId),
}

impl Circuit {
    pub fn new(
        gates: Vec<Gate>,
        output: GateId,
        degree: usize,
        num_vars: usize,
    ) -> Result<Self, CircuitError> {
        for (id, gate) in gates.iter().enumerate() {
            let check = |operand: GateId| {
                if operand >= id {
                    Err(CircuitError::OperandOrder { gate: id, operand })
                } else {
                    Ok(())
                }
            };
            match gate {
                Gate::Add(ops) => ops.iter().copied().try_for_each(check)?,
                Gate::MulByInput(op, _) => check(*op)?,
                Gate::Input(_) | Gate::Zero | Gate::One => {}
            }
        }
        Ok(Self { gates, output, degree, num_vars })
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn output(&self) -> GateId {
        self.output
    }

    /// Total degree k of every monomial of the output.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    /// True when the output is the constant zero polynomial by construction.
    pub fn is_identically_zero(&self) -> bool {
        matches!(self.gates[self.output], Gate::Zero)
    }

    /// Single-pass evaluation over any commutative ring.
    ///
    /// `assignment[v]` is the value substituted for vertex v's variable; it
    /// must cover every variable appearing in the circuit.
    pub fn evaluate<R>(&self, assignment: &[R]) -> Result<R, CircuitError>
    where
        R: Clone + Zero + One + AddAssign<R> + Mul<Output = R>,
    {
        let var = |v: VertexId| -> Result<R, CircuitError> {
            assignment.get(v.index()).cloned().ok_or(CircuitError::MissingAssignment(v))
        };
        let mut values: Vec<R> = Vec::with_capacity(self.gates.len());
        for gate in &self.gates {
            let value = match gate {
                Gate::Input(v) => var(*v)?,
                Gate::Zero => R::zero(),
                Gate::One => R::one(),
                Gate::Add(ops) => {
                    let mut acc = R::zero();
                    for &op in ops {
                        acc += values[op].clone();
                    }
                    acc
                }
                Gate::MulByInput(op, v) => values[*op].clone() * var(*v)?,
            };
            values.push(value);
        }
        Ok(values.swap_remove(self.output))
    }

    /// How many gates read each gate's value (the output counts as a reader).
    pub fn consumer_counts(&self) -> Vec<u32> {
        let mut counts = vec![0u32; self.gates.len()];
        for gate in &self.gates {
            match gate {
                Gate::Add(ops) => ops.iter().for_each(|&op| counts[op] += 1),
                Gate::MulByInput(op, _) => counts[*op] += 1,
                _ => {}
            }
        }
        counts[self.output] += 1;
        counts
    }

    /// Debug text dump: one gate per line, `id kind operands`, topological
    /// order, then the output gate id.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (id, gate) in self.gates.iter().enumerate() {
            match gate {
                Gate::Input(v) => writeln!(out, "{id} input {v}"),
                Gate::Zero => writeln!(out, "{id} zero"),
                Gate::One => writeln!(out, "{id} one"),
                Gate::Add(ops) => {
                    let ops: Vec<String> = ops.iter().map(|o| o.to_string()).collect();
                    writeln!(out, "{id} add {}", ops.join(" "))
                }
                Gate::MulByInput(op, v) => writeln!(out, "{id} mulv {op} {v}"),
            }
            .expect("write to string");
        }
        writeln!(out, "output {}", self.output).expect("write to string");
        out
    }
}

/// Shared builder state: gates are appended in topological order.
struct Builder {
    gates: Vec<Gate>,
    input_gate: HashMap<VertexId, GateId>,
}

impl Builder {
    fn new() -> Self {
        Self { gates: Vec::new(), input_gate: HashMap::new() }
    }

    fn push(&mut self, gate: Gate) -> GateId {
        self.gates.push(gate);
        self.gates.len() - 1
    }

    fn input(&mut self, v: VertexId) -> GateId {
        if let Some(&g) = self.input_gate.get(&v) {
            return g;
        }
        let g = self.push(Gate::Input(v));
        self.input_gate.insert(v, g);
        g
    }

    /// Chain of skew products computing the monomial of one edge.
    fn edge_monomial(&mut self, edge: &[VertexId]) -> GateId {
        let mut g = self.input(edge[0]);
        for &v in &edge[1..] {
            g = self.push(Gate::MulByInput(g, v));
        }
        g
    }

    /// Sum of the given gates; a single operand passes through unchanged.
    fn sum(&mut self, ops: Vec<GateId>) -> GateId {
        debug_assert!(!ops.is_empty());
        if ops.len() == 1 {
            ops[0]
        } else {
            self.push(Gate::Add(ops))
        }
    }
}

/// Edges indexed by their (r-1)-prefix; predecessor lookup is "edges whose
/// suffix equals my prefix".
fn predecessor_lists(h: &Hypergraph) -> Vec<Vec<usize>> {
    let r = h.uniformity();
    let mut by_suffix: HashMap<&[VertexId], Vec<usize>> = HashMap::new();
    for (i, e) in h.edges().iter().enumerate() {
        by_suffix.entry(&e[1..r]).or_default().push(i);
    }
    h.edges()
        .iter()
        .map(|e| by_suffix.get(&e[..r - 1]).cloned().unwrap_or_default())
        .collect()
}

/// Builds the degree-k tight-walk polynomial of a directed hypergraph.
///
/// One live label per (edge, length); labels that no walk can reach are
/// pruned. Gate count stays within 4·m·k (measured by tests).
pub fn build_path_circuit(h: &Hypergraph, k: usize) -> Result<Circuit, CircuitError> {
    if !h.is_directed() {
        return Err(CircuitError::UndirectedInput);
    }
    let r = h.uniformity();
    if k < r {
        return Err(CircuitError::KTooSmall { k, r });
    }
    let m = h.num_edges();
    let preds = predecessor_lists(h);
    let mut b = Builder::new();

    // level r: one monomial chain per edge
    let mut live: Vec<Option<GateId>> = h.edges().iter().map(|e| Some(b.edge_monomial(e))).collect();

    for _t in (r + 1)..=k {
        let mut next: Vec<Option<GateId>> = vec![None; m];
        for (ei, edge) in h.edges().iter().enumerate() {
            let ops: Vec<GateId> = preds[ei].iter().filter_map(|&p| live[p]).collect();
            if ops.is_empty() {
                continue;
            }
            let sum = b.sum(ops);
            next[ei] = Some(b.push(Gate::MulByInput(sum, edge[r - 1])));
        }
        live = next;
    }

    let final_ops: Vec<GateId> = live.iter().filter_map(|&g| g).collect();
    let output = if final_ops.is_empty() { b.push(Gate::Zero) } else { b.push(Gate::Add(final_ops)) };
    Circuit::new(b.gates, output, k, h.num_vertices())
}

/// Builds the degree-k closed-tight-walk polynomial of a directed hypergraph.
///
/// Labels carry the start edge as well, so the output can require that the
/// r-1 wrap-around windows (last r-1 vertices of the final window followed
/// by the first r-1 of the start window) are all edges. Size stays within
/// a constant times m²·k.
pub fn build_cycle_circuit(h: &Hypergraph, k: usize) -> Result<Circuit, CircuitError> {
    if !h.is_directed() {
        return Err(CircuitError::UndirectedInput);
    }
    let r = h.uniformity();
    if k < r {
        return Err(CircuitError::KTooSmall { k, r });
    }
    let m = h.num_edges();
    let preds = predecessor_lists(h);

    // closers[s] = edges e such that the walk (s ... e) closes into a cycle
    let mut closers: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut window = Vec::with_capacity(r);
    for (si, start) in h.edges().iter().enumerate() {
        'edge: for (ei, end) in h.edges().iter().enumerate() {
            for j in 1..r {
                window.clear();
                window.extend_from_slice(&end[j..r]);
                window.extend_from_slice(&start[..j]);
                if !h.has_window(&window) {
                    continue 'edge;
                }
            }
            closers[si].push(ei);
        }
    }

    let mut b = Builder::new();
    let mut final_ops: Vec<GateId> = Vec::new();
    for (si, start) in h.edges().iter().enumerate() {
        if closers[si].is_empty() {
            continue;
        }
        // per-start DP over (current edge, length), re-using one base chain
        let base = b.edge_monomial(start);
        let mut live: Vec<Option<GateId>> = vec![None; m];
        live[si] = Some(base);
        for _t in (r + 1)..=k {
            let mut next: Vec<Option<GateId>> = vec![None; m];
            for (ei, edge) in h.edges().iter().enumerate() {
                let ops: Vec<GateId> = preds[ei].iter().filter_map(|&p| live[p]).collect();
                if ops.is_empty() {
                    continue;
                }
                let sum = b.sum(ops);
                next[ei] = Some(b.push(Gate::MulByInput(sum, edge[r - 1])));
            }
            live = next;
        }
        for &ei in &closers[si] {
            if let Some(g) = live[ei] {
                final_ops.push(g);
            }
        }
    }

    let output = if final_ops.is_empty() { b.push(Gate::Zero) } else { b.push(Gate::Add(final_ops)) };
    Circuit::new(b.gates, output, k, h.num_vertices())
}
