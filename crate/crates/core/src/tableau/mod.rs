//! Stabilizer tableaux, Clifford circuits, and graph-state verification.
//!
//! A tableau keeps `n` stabilizer generators as rows of an `n × 2n` binary
//! matrix (x part, then z part) together with one sign bit per row. The pair
//! `(x, z) = (1, 1)` denotes `Y`, and gates update signs with the usual
//! Aaronson–Gottesman rules, so deterministic measurement outcomes are exact.
//! Graph-state checks are still stated up to a Pauli correction.

mod circuit;
mod clifford2;

use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub use circuit::{circuit_action, rewrite_circuit, trace_to_circuit, Circuit, Gate, Rewritten};
pub use clifford2::{
    classify, decompose_two_qubit, enumerate_two_qubit_classes, normal_form_counts, ClassCounts, CliffordClass,
    NormalForm, Symplectic2Q,
};

use crate::error::{Error, Result};
use crate::f2linalg::{self, BitMatrix};
use crate::graph::{Graph, OpTrace};

/// A Pauli operator up to phase, `X^x Z^z` on each qubit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pauli {
    pub x: Vec<bool>,
    pub z: Vec<bool>,
}

impl Pauli {
    pub fn identity(n: usize) -> Pauli {
        Pauli { x: vec![false; n], z: vec![false; n] }
    }

    pub fn weight(&self) -> usize {
        self.x.iter().zip(&self.z).filter(|(x, z)| **x || **z).count()
    }

    pub fn is_identity(&self) -> bool {
        self.weight() == 0
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (&x, &z) in self.x.iter().zip(&self.z) {
            f.write_str(match (x, z) {
                (false, false) => "I",
                (true, false) => "X",
                (true, true) => "Y",
                (false, true) => "Z",
            })?;
        }
        Ok(())
    }
}

/// How random measurement outcomes are chosen.
#[derive(Clone, Debug)]
pub enum MeasurePolicy {
    ForceZero,
    ForceOne,
    Random(Box<StdRng>),
}

impl MeasurePolicy {
    pub fn seeded(seed: u64) -> MeasurePolicy {
        MeasurePolicy::Random(Box::new(StdRng::seed_from_u64(seed)))
    }

    fn draw(&mut self) -> bool {
        match self {
            MeasurePolicy::ForceZero => false,
            MeasurePolicy::ForceOne => true,
            MeasurePolicy::Random(rng) => rng.gen(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Measurement {
    pub outcome: bool,
    pub deterministic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    n: usize,
    gen: BitMatrix,
    signs: Vec<bool>,
}

// Phase exponent (power of i) picked up when multiplying Pauli (x1,z1) into (x2,z2).
fn g(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
    let (x2, z2) = (x2 as i32, z2 as i32);
    match (x1, z1) {
        (false, false) => 0,
        (true, true) => z2 - x2,
        (true, false) => z2 * (2 * x2 - 1),
        (false, true) => x2 * (1 - 2 * z2),
    }
}

impl Tableau {
    /// `|+⟩^n`, the graph state of the empty graph: generators `X_i`.
    pub fn plus_state(n: usize) -> Tableau {
        let mut gen = BitMatrix::zeros(n, 2 * n);
        for i in 0..n {
            gen.set(i, i, true);
        }
        Tableau { n, gen, signs: vec![false; n] }
    }

    /// `|0⟩^n`: generators `Z_i`.
    pub fn zero_state(n: usize) -> Tableau {
        let mut gen = BitMatrix::zeros(n, 2 * n);
        for i in 0..n {
            gen.set(i, n + i, true);
        }
        Tableau { n, gen, signs: vec![false; n] }
    }

    /// Builds a tableau after checking commutation and independence.
    pub fn from_parts(gen: BitMatrix, signs: Vec<bool>) -> Result<Tableau> {
        let n = gen.rows();
        if gen.cols() != 2 * n || signs.len() != n {
            return Err(Error::Precondition("generator matrix must be n x 2n with n signs".into()));
        }
        let t = Tableau { n, gen, signs };
        if !t.is_valid() {
            return Err(Error::Precondition("generators must commute and be independent".into()));
        }
        Ok(t)
    }

    /// The stabilizer state of `g` with all signs positive: rows `X_v Z_{N(v)}`.
    pub fn graph_state(g: &Graph) -> Tableau {
        let n = g.n();
        let mut t = Tableau::plus_state(n);
        for (u, v) in g.edges() {
            t.gen.set(u, n + v, true);
            t.gen.set(v, n + u, true);
        }
        t
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &BitMatrix {
        &self.gen
    }

    pub fn signs(&self) -> &[bool] {
        &self.signs
    }

    fn x(&self, r: usize, q: usize) -> bool {
        self.gen.get(r, q)
    }

    fn z(&self, r: usize, q: usize) -> bool {
        self.gen.get(r, self.n + q)
    }

    /// Isotropy `G Λ Gᵀ = 0` plus full row rank.
    pub fn is_valid(&self) -> bool {
        let n = self.n;
        for i in 0..n {
            for j in i + 1..n {
                let mut s = false;
                for q in 0..n {
                    s ^= (self.x(i, q) & self.z(j, q)) ^ (self.z(i, q) & self.x(j, q));
                }
                if s {
                    return false;
                }
            }
        }
        self.gen.rank() == n
    }

    /// Row `h` becomes the product of rows `i` and `h`, with its sign.
    fn rowsum(&mut self, h: usize, i: usize) {
        let mut phase = 2 * (self.signs[h] as i32) + 2 * (self.signs[i] as i32);
        for q in 0..self.n {
            phase += g(self.x(i, q), self.z(i, q), self.x(h, q), self.z(h, q));
        }
        debug_assert!(phase.rem_euclid(2) == 0, "rows must commute");
        self.signs[h] = phase.rem_euclid(4) == 2;
        self.gen.xor_row(h, i);
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(Error::VertexOutOfRange { vertex: q, n: self.n });
        }
        Ok(())
    }

    /// Conjugates every generator by a unitary gate.
    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        let (a, b) = gate.qubits();
        self.check_qubit(a)?;
        if let Some(b) = b {
            self.check_qubit(b)?;
            if a == b {
                return Err(Error::SameVertex(a));
            }
        }
        let n = self.n;
        match *gate {
            Gate::H(q) | Gate::S(q) => {
                for r in 0..n {
                    if self.x(r, q) && self.z(r, q) {
                        self.signs[r] ^= true;
                    }
                }
            }
            Gate::Sdg(q) => {
                for _ in 0..3 {
                    self.apply_gate(&Gate::S(q))?;
                }
                return Ok(());
            }
            Gate::X(q) => (0..n).for_each(|r| self.signs[r] ^= self.z(r, q)),
            Gate::Z(q) => (0..n).for_each(|r| self.signs[r] ^= self.x(r, q)),
            Gate::Y(q) => (0..n).for_each(|r| self.signs[r] ^= self.x(r, q) ^ self.z(r, q)),
            Gate::Cz(a, b) => {
                for r in 0..n {
                    if self.x(r, a) && self.x(r, b) && (self.z(r, a) ^ self.z(r, b)) {
                        self.signs[r] ^= true;
                    }
                }
            }
            Gate::Swap(..) => {}
            Gate::Clifford2 { a, b, mat } => {
                for g in clifford2::decompose_on(&mat, a, b)? {
                    self.apply_gate(&g)?;
                }
                return Ok(());
            }
            Gate::MeasZ(_) | Gate::CondZ { .. } => {
                return Err(Error::MalformedCircuit(format!("`{gate}` is not a unitary gate")));
            }
        }
        circuit::act_on_columns(&mut self.gen, n, gate)
    }

    /// Applies `X^x Z^z`, flipping the sign of every generator it anticommutes with.
    pub fn apply_pauli(&mut self, p: &Pauli) -> Result<()> {
        if p.x.len() != self.n || p.z.len() != self.n {
            return Err(Error::Precondition("Pauli length differs from the qubit count".into()));
        }
        for q in 0..self.n {
            if p.x[q] {
                self.apply_gate(&Gate::X(q))?;
            }
            if p.z[q] {
                self.apply_gate(&Gate::Z(q))?;
            }
        }
        Ok(())
    }

    /// Measures qubit `q` in the Z basis and discards it, leaving `n - 1` qubits.
    pub fn measure_z(&mut self, q: usize, policy: &mut MeasurePolicy) -> Result<Measurement> {
        self.check_qubit(q)?;
        let n = self.n;
        let (p, m) = match (0..n).find(|&r| self.x(r, q)) {
            Some(p) => {
                for r in 0..n {
                    if r != p && self.x(r, q) {
                        self.rowsum(r, p);
                    }
                }
                let outcome = policy.draw();
                for c in 0..2 * n {
                    self.gen.set(p, c, c == n + q);
                }
                self.signs[p] = outcome;
                (p, Measurement { outcome, deterministic: false })
            }
            None => {
                // Z_q lies in the stabilizer; gather it into one row
                let mut target = vec![false; 2 * n];
                target[n + q] = true;
                let combo = f2linalg::solve(&self.gen.transpose(), &target).expect("Z_q commutes with every generator");
                let rows: Vec<usize> = (0..n).filter(|&r| combo[r]).collect();
                let p = rows[0];
                for &r in &rows[1..] {
                    self.rowsum(p, r);
                }
                (p, Measurement { outcome: self.signs[p], deterministic: true })
            }
        };
        for r in 0..n {
            if r != p && self.z(r, q) {
                self.rowsum(r, p);
            }
        }
        let keep_rows: Vec<usize> = (0..n).filter(|&r| r != p).collect();
        let keep_cols: Vec<usize> = (0..2 * n).filter(|&c| c != q && c != n + q).collect();
        self.gen = self.gen.select(&keep_rows, &keep_cols);
        self.signs = keep_rows.iter().map(|&r| self.signs[r]).collect();
        self.n -= 1;
        Ok(m)
    }
}

/// State after running a circuit.
#[derive(Clone, Debug)]
pub struct Simulation {
    pub tableau: Tableau,
    /// Circuit qubit held by each remaining tableau column.
    pub qubits: Vec<usize>,
    /// Outcome of each circuit qubit's measurement, if it was measured.
    pub outcomes: Vec<Option<bool>>,
}

/// Runs `c` from `|0…0⟩`.
pub fn simulate(c: &Circuit, policy: &mut MeasurePolicy) -> Result<Simulation> {
    c.validate()?;
    let mut t = Tableau::zero_state(c.n);
    let mut qubits: Vec<usize> = (0..c.n).collect();
    let mut outcomes = vec![None; c.n];
    let local = |qubits: &[usize], q: usize| {
        qubits.iter().position(|&x| x == q).ok_or_else(|| Error::MalformedCircuit(format!("qubit {q} was measured")))
    };
    for g in &c.gates {
        match *g {
            Gate::MeasZ(q) => {
                let lq = local(&qubits, q)?;
                outcomes[q] = Some(t.measure_z(lq, policy)?.outcome);
                qubits.remove(lq);
            }
            Gate::CondZ { target, cond } => {
                if outcomes[cond] == Some(true) {
                    t.apply_gate(&Gate::Z(local(&qubits, target)?))?;
                }
            }
            other => t.apply_gate(&other.relabel_with(|q| local(&qubits, q))?)?,
        }
    }
    Ok(Simulation { tableau: t, qubits, outcomes })
}

/// Outcome of comparing a tableau with a graph state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphStateCheck {
    Exact,
    /// Equal after applying `correction` to the tableau's state.
    UpToPauli {
        correction: Pauli,
    },
    Mismatch,
}

impl GraphStateCheck {
    pub fn is_match(&self) -> bool {
        !matches!(self, GraphStateCheck::Mismatch)
    }
}

impl fmt::Display for GraphStateCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphStateCheck::Exact => f.write_str("match"),
            GraphStateCheck::UpToPauli { correction } => write!(f, "match-up-to-pauli {correction}"),
            GraphStateCheck::Mismatch => f.write_str("mismatch"),
        }
    }
}

/// Brings the generators to the form `[I | A]` and compares `A` with the
/// adjacency matrix of `g`; differing signs are fixed by a Pauli found by
/// solving `[A | I]·(a; b) = signs`.
pub fn check_graph_state(t: &Tableau, g: &Graph) -> GraphStateCheck {
    let n = t.n;
    if g.n() != n {
        return GraphStateCheck::Mismatch;
    }
    let mut w = t.clone();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| w.x(r, c)) else {
            return GraphStateCheck::Mismatch;
        };
        if p != c {
            w.gen.swap_rows(p, c);
            w.signs.swap(p, c);
        }
        for r in 0..n {
            if r != c && w.x(r, c) {
                w.rowsum(r, c);
            }
        }
    }
    for r in 0..n {
        for q in 0..n {
            if w.z(r, q) != g.has_edge(r, q) {
                return GraphStateCheck::Mismatch;
            }
        }
    }
    if w.signs.iter().all(|s| !s) {
        return GraphStateCheck::Exact;
    }
    // Pauli (a|b) anticommutes with row r exactly when (A a + b)_r = 1
    let mut system = BitMatrix::zeros(n, 2 * n);
    for r in 0..n {
        for q in 0..n {
            system.set(r, q, g.has_edge(r, q));
        }
        system.set(r, n + r, true);
    }
    match f2linalg::solve(&system, &w.signs) {
        Some(sol) => GraphStateCheck::UpToPauli { correction: Pauli { x: sol[..n].to_vec(), z: sol[n..].to_vec() } },
        None => GraphStateCheck::Mismatch,
    }
}

/// Compiles `trace`, simulates it with seeded measurement outcomes, and checks
/// the surviving qubits against `target`.
pub fn verify_trace(trace: &OpTrace, target: &Graph, seed: u64) -> Result<(GraphStateCheck, Simulation)> {
    let c = trace_to_circuit(trace)?;
    let sim = simulate(&c, &mut MeasurePolicy::seeded(seed))?;
    Ok((check_graph_state(&sim.tableau, target), sim))
}

#[cfg(test)]
mod tests;
