use std::fmt;

use super::clifford2::{decompose_on, Symplectic2Q};
use crate::error::{Error, Result};
use crate::f2linalg::BitMatrix;
use crate::graph::{Graph, GraphOp, LiveIndex, OpTrace};

/// One circuit instruction. Qubit indices are fixed for the whole circuit;
/// measured qubits are discarded and may not be used again.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    S(usize),
    Sdg(usize),
    X(usize),
    Y(usize),
    Z(usize),
    Cz(usize, usize),
    Swap(usize, usize),
    MeasZ(usize),
    /// Z on `target` when the earlier measurement of `cond` gave 1.
    CondZ {
        target: usize,
        cond: usize,
    },
    /// Arbitrary two-qubit Clifford given by its action on `(x_a, x_b, z_a, z_b)`.
    Clifford2 {
        a: usize,
        b: usize,
        mat: Symplectic2Q,
    },
}

impl Gate {
    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::H(q) | Gate::S(q) | Gate::Sdg(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) | Gate::MeasZ(q) => (q, None),
            Gate::Cz(a, b) | Gate::Swap(a, b) | Gate::Clifford2 { a, b, .. } => (a, Some(b)),
            Gate::CondZ { target, cond } => (target, Some(cond)),
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cz(..) | Gate::Swap(..) | Gate::Clifford2 { .. })
    }

    pub(crate) fn relabel(self, f: impl Fn(usize) -> usize) -> Gate {
        self.relabel_with(|q| Ok(f(q))).expect("infallible relabeling")
    }

    pub(crate) fn relabel_with(self, f: impl Fn(usize) -> Result<usize>) -> Result<Gate> {
        Ok(match self {
            Gate::H(q) => Gate::H(f(q)?),
            Gate::S(q) => Gate::S(f(q)?),
            Gate::Sdg(q) => Gate::Sdg(f(q)?),
            Gate::X(q) => Gate::X(f(q)?),
            Gate::Y(q) => Gate::Y(f(q)?),
            Gate::Z(q) => Gate::Z(f(q)?),
            Gate::Cz(a, b) => Gate::Cz(f(a)?, f(b)?),
            Gate::Swap(a, b) => Gate::Swap(f(a)?, f(b)?),
            Gate::MeasZ(q) => Gate::MeasZ(f(q)?),
            Gate::CondZ { target, cond } => Gate::CondZ { target: f(target)?, cond: f(cond)? },
            Gate::Clifford2 { a, b, mat } => Gate::Clifford2 { a: f(a)?, b: f(b)?, mat },
        })
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::H(q) => write!(f, "H {q}"),
            Gate::S(q) => write!(f, "S {q}"),
            Gate::Sdg(q) => write!(f, "SDG {q}"),
            Gate::X(q) => write!(f, "X {q}"),
            Gate::Y(q) => write!(f, "Y {q}"),
            Gate::Z(q) => write!(f, "Z {q}"),
            Gate::Cz(a, b) => write!(f, "CZ {a} {b}"),
            Gate::Swap(a, b) => write!(f, "SWAP {a} {b}"),
            Gate::MeasZ(q) => write!(f, "MEASZ {q}"),
            Gate::CondZ { target, cond } => write!(f, "Z {target} IF {cond}"),
            Gate::Clifford2 { a, b, mat } => write!(f, "C2 {a} {b} {mat}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Circuit {
    pub n: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize) -> Circuit {
        Circuit { n, gates: Vec::new() }
    }

    pub fn push(&mut self, g: Gate) {
        self.gates.push(g);
    }

    pub fn cz_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Cz(..))).count()
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    /// Checks ranges, distinct pairs, and that measured qubits are not reused
    /// except as conditions.
    pub fn validate(&self) -> Result<()> {
        let mut measured = vec![false; self.n];
        for (i, g) in self.gates.iter().enumerate() {
            let bad = |msg: String| Err(Error::MalformedCircuit(format!("gate {i} `{g}`: {msg}")));
            let (a, b) = g.qubits();
            if a >= self.n || b.is_some_and(|b| b >= self.n) {
                return bad(format!("qubit out of range for {} qubits", self.n));
            }
            if b == Some(a) {
                return bad("repeated qubit".into());
            }
            match *g {
                Gate::CondZ { target, cond } => {
                    if !measured[cond] {
                        return bad("condition on an unmeasured qubit".into());
                    }
                    if measured[target] {
                        return bad("target already measured".into());
                    }
                }
                _ => {
                    if measured[a] || b.is_some_and(|b| measured[b]) {
                        return bad("qubit already measured".into());
                    }
                    if let Gate::MeasZ(q) = *g {
                        measured[q] = true;
                    }
                }
            }
        }
        Ok(())
    }

    /// `CIRCUIT n=<count>` followed by one gate per line.
    pub fn parse(text: &str) -> Result<Circuit> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let perr = |line: usize, message: String| Error::Parse { line, message };
        let (hl, header) = lines.next().ok_or_else(|| perr(1, "missing CIRCUIT header".into()))?;
        let n = header
            .strip_prefix("CIRCUIT")
            .and_then(|r| r.trim().strip_prefix("n="))
            .and_then(|c| c.parse::<usize>().ok())
            .ok_or_else(|| perr(hl, format!("bad header `{header}`")))?;
        let mut c = Circuit::new(n);
        for (ln, line) in lines {
            let t: Vec<&str> = line.split_whitespace().collect();
            let q = |i: usize| -> Result<usize> {
                t.get(i)
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| perr(ln, format!("expected qubit index in `{line}`")))
            };
            let arity = |k: usize| -> Result<()> {
                if t.len() == k {
                    Ok(())
                } else {
                    Err(perr(ln, format!("wrong number of fields in `{line}`")))
                }
            };
            let gate = match t[0] {
                "H" => arity(2).and_then(|_| Ok(Gate::H(q(1)?)))?,
                "S" => arity(2).and_then(|_| Ok(Gate::S(q(1)?)))?,
                "SDG" => arity(2).and_then(|_| Ok(Gate::Sdg(q(1)?)))?,
                "X" => arity(2).and_then(|_| Ok(Gate::X(q(1)?)))?,
                "Y" => arity(2).and_then(|_| Ok(Gate::Y(q(1)?)))?,
                "Z" if t.len() == 4 && t[2] == "IF" => Gate::CondZ { target: q(1)?, cond: q(3)? },
                "Z" => arity(2).and_then(|_| Ok(Gate::Z(q(1)?)))?,
                "CZ" => arity(3).and_then(|_| Ok(Gate::Cz(q(1)?, q(2)?)))?,
                "SWAP" => arity(3).and_then(|_| Ok(Gate::Swap(q(1)?, q(2)?)))?,
                "MEASZ" => arity(2).and_then(|_| Ok(Gate::MeasZ(q(1)?)))?,
                "C2" => {
                    arity(4)?;
                    let mat: Symplectic2Q = t[3].parse().map_err(|e: Error| perr(ln, e.to_string()))?;
                    Gate::Clifford2 { a: q(1)?, b: q(2)?, mat }
                }
                other => return Err(perr(ln, format!("unknown gate `{other}`"))),
            };
            c.push(gate);
        }
        c.validate()?;
        Ok(c)
    }

    pub fn serialize(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CIRCUIT n={}", self.n)?;
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Applies the column action of a unitary gate to every row of `m`, whose
/// columns are `x_0..x_{n-1}, z_0..z_{n-1}`.
pub(crate) fn act_on_columns(m: &mut BitMatrix, n: usize, gate: &Gate) -> Result<()> {
    let rows = m.rows();
    match *gate {
        Gate::H(q) => {
            for r in 0..rows {
                let (x, z) = (m.get(r, q), m.get(r, n + q));
                m.set(r, q, z);
                m.set(r, n + q, x);
            }
        }
        Gate::S(q) | Gate::Sdg(q) => {
            for r in 0..rows {
                if m.get(r, q) {
                    m.toggle(r, n + q);
                }
            }
        }
        Gate::X(_) | Gate::Y(_) | Gate::Z(_) => {}
        Gate::Cz(a, b) => {
            for r in 0..rows {
                let (xa, xb) = (m.get(r, a), m.get(r, b));
                if xb {
                    m.toggle(r, n + a);
                }
                if xa {
                    m.toggle(r, n + b);
                }
            }
        }
        Gate::Swap(a, b) => {
            for r in 0..rows {
                for off in [0, n] {
                    let (pa, pb) = (m.get(r, off + a), m.get(r, off + b));
                    m.set(r, off + a, pb);
                    m.set(r, off + b, pa);
                }
            }
        }
        Gate::Clifford2 { a, b, mat } => {
            let cols = [a, b, n + a, n + b];
            for r in 0..rows {
                let v: [bool; 4] = cols.map(|c| m.get(r, c));
                let out = mat.apply_row(v);
                for (c, bit) in cols.iter().zip(out) {
                    m.set(r, *c, bit);
                }
            }
        }
        Gate::MeasZ(_) | Gate::CondZ { .. } => {
            return Err(Error::MalformedCircuit(format!("`{gate}` has no symplectic action")));
        }
    }
    Ok(())
}

/// The `2n × 2n` matrix `L` with `p ↦ p·L` describing the circuit's action on
/// Pauli operators, signs ignored. Measurements are rejected.
pub fn circuit_action(c: &Circuit) -> Result<BitMatrix> {
    c.validate()?;
    let mut m = BitMatrix::identity(2 * c.n);
    for g in &c.gates {
        act_on_columns(&mut m, c.n, g)?;
    }
    Ok(m)
}

fn push_lc(c: &mut Circuit, v: usize, neighbors: impl IntoIterator<Item = usize>) {
    c.gates.extend([Gate::H(v), Gate::S(v), Gate::H(v)]);
    c.gates.extend(neighbors.into_iter().map(Gate::S));
}

/// Compiles a construction trace into a circuit preparing its graph state
/// from `|0…0⟩`, with one CZ per cost-one operation.
pub fn trace_to_circuit(trace: &OpTrace) -> Result<Circuit> {
    let n = trace.initial;
    let mut c = Circuit::new(n);
    c.gates.extend((0..n).map(Gate::H));
    let mut g = Graph::empty(n);
    let mut live = LiveIndex::new(n);
    let mut orig: Vec<usize> = (0..n).collect();
    for (step, &op) in trace.ops.iter().enumerate() {
        let wrap = |e| Error::Replay { step, reason: Box::new(e) };
        let local = live.resolve_op(op).map_err(wrap)?;
        match op {
            GraphOp::Lc(v) => {
                let (lv, _) = local.vertices();
                push_lc(&mut c, v, g.neighbors(lv).into_iter().map(|u| orig[u]));
            }
            GraphOp::Ec1(a, b) => c.push(Gate::Cz(a, b)),
            GraphOp::Ec2(a, b) => c.gates.extend([Gate::H(b), Gate::Cz(a, b), Gate::H(b)]),
            GraphOp::Ec3(a, b) => c.gates.extend([Gate::H(a), Gate::H(b), Gate::Cz(a, b), Gate::H(a), Gate::H(b)]),
            GraphOp::Delete(v) => {
                let (lv, _) = local.vertices();
                c.push(Gate::MeasZ(v));
                c.gates.extend(g.neighbors(lv).into_iter().map(|u| Gate::CondZ { target: orig[u], cond: v }));
            }
        }
        g.apply_op_mut(local).map_err(wrap)?;
        if let GraphOp::Delete(v) = op {
            let (lv, _) = local.vertices();
            orig.remove(lv);
            live.remove(v);
        }
    }
    Ok(c)
}

/// A circuit preceded by a qubit permutation: the content of wire `i` first
/// moves to wire `permutation[i]`, then `circuit` runs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rewritten {
    pub permutation: Vec<usize>,
    pub circuit: Circuit,
}

impl Rewritten {
    /// The symplectic action of the permutation followed by the circuit.
    pub fn action(&self) -> Result<BitMatrix> {
        let n = self.circuit.n;
        let mut p = BitMatrix::zeros(2 * n, 2 * n);
        for (i, &t) in self.permutation.iter().enumerate() {
            p.set(i, t, true);
            p.set(n + i, n + t, true);
        }
        Ok(p.mul(&circuit_action(&self.circuit)?))
    }
}

/// Rewrites a measurement-free circuit so that it uses only single-qubit
/// gates and CZ after one leading permutation, with at most one CZ per
/// two-qubit gate of the input.
pub fn rewrite_circuit(c: &Circuit) -> Result<Rewritten> {
    c.validate()?;
    let mut expanded = Vec::with_capacity(c.gates.len());
    for g in &c.gates {
        match *g {
            Gate::Clifford2 { a, b, mat } => expanded.extend(decompose_on(&mat, a, b)?),
            Gate::MeasZ(_) | Gate::CondZ { .. } => {
                return Err(Error::MalformedCircuit("rewriting needs a measurement-free circuit".into()));
            }
            other => expanded.push(other),
        }
    }
    // Walk backwards, floating every SWAP to the front; gates before a SWAP
    // are relabeled by the permutation collected so far.
    let mut sigma: Vec<usize> = (0..c.n).collect();
    let mut out = Vec::with_capacity(expanded.len());
    for g in expanded.into_iter().rev() {
        match g.relabel(|q| sigma[q]) {
            Gate::Swap(p, q) => {
                for s in sigma.iter_mut() {
                    if *s == p {
                        *s = q;
                    } else if *s == q {
                        *s = p;
                    }
                }
            }
            mapped => out.push(mapped),
        }
    }
    out.reverse();
    Ok(Rewritten { permutation: sigma, circuit: Circuit { n: c.n, gates: out } })
}
