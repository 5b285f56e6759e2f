use std::fmt;

use super::Graph;
use crate::error::{Error, Result};

/// One graph transformation. Vertex arguments are indices into the current graph
/// for [`Graph::apply_op`], and original indices inside an [`OpTrace`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GraphOp {
    Lc(usize),
    Ec1(usize, usize),
    Ec2(usize, usize),
    Ec3(usize, usize),
    Delete(usize),
}

impl GraphOp {
    pub fn is_cost_one(self) -> bool {
        matches!(self, GraphOp::Ec1(..) | GraphOp::Ec2(..) | GraphOp::Ec3(..))
    }

    pub(crate) fn map(self, f: impl Fn(usize) -> usize) -> GraphOp {
        match self {
            GraphOp::Lc(v) => GraphOp::Lc(f(v)),
            GraphOp::Ec1(v, w) => GraphOp::Ec1(f(v), f(w)),
            GraphOp::Ec2(v, w) => GraphOp::Ec2(f(v), f(w)),
            GraphOp::Ec3(v, w) => GraphOp::Ec3(f(v), f(w)),
            GraphOp::Delete(v) => GraphOp::Delete(f(v)),
        }
    }

    pub(crate) fn vertices(self) -> (usize, Option<usize>) {
        match self {
            GraphOp::Lc(v) | GraphOp::Delete(v) => (v, None),
            GraphOp::Ec1(v, w) | GraphOp::Ec2(v, w) | GraphOp::Ec3(v, w) => (v, Some(w)),
        }
    }
}

impl fmt::Display for GraphOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GraphOp::Lc(v) => write!(f, "LC {v}"),
            GraphOp::Ec1(v, w) => write!(f, "EC1 {v} {w}"),
            GraphOp::Ec2(v, w) => write!(f, "EC2 {v} {w}"),
            GraphOp::Ec3(v, w) => write!(f, "EC3 {v} {w}"),
            GraphOp::Delete(v) => write!(f, "DEL {v}"),
        }
    }
}

/// A construction sequence starting from the empty graph on `initial` vertices.
///
/// Indices in `ops` always refer to the initial numbering; deletions do not
/// shift them.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct OpTrace {
    pub initial: usize,
    pub ops: Vec<GraphOp>,
}

impl OpTrace {
    pub fn new(initial: usize) -> Self {
        OpTrace { initial, ops: Vec::new() }
    }

    pub fn push(&mut self, op: GraphOp) {
        self.ops.push(op);
    }

    pub fn cost(&self) -> usize {
        self.ops.iter().filter(|op| op.is_cost_one()).count()
    }

    pub fn deletions(&self) -> usize {
        self.ops.iter().filter(|op| matches!(op, GraphOp::Delete(_))).count()
    }

    /// Vertex count of the final graph.
    pub fn target_n(&self) -> usize {
        self.initial - self.deletions()
    }

    /// Original indices of the vertices that survive to the end, in order.
    pub fn survivors(&self) -> Vec<usize> {
        let mut alive = vec![true; self.initial];
        for op in &self.ops {
            if let GraphOp::Delete(v) = op {
                if *v < self.initial {
                    alive[*v] = false;
                }
            }
        }
        (0..self.initial).filter(|&v| alive[v]).collect()
    }
}

/// Maps original vertex indices to positions in a graph that shrinks by deletion.
#[derive(Clone, Debug)]
pub(crate) struct LiveIndex {
    pos: Vec<Option<usize>>,
}

impl LiveIndex {
    pub(crate) fn new(n: usize) -> Self {
        LiveIndex { pos: (0..n).map(Some).collect() }
    }

    pub(crate) fn resolve(&self, v: usize) -> Result<usize> {
        match self.pos.get(v) {
            None => Err(Error::VertexOutOfRange { vertex: v, n: self.pos.len() }),
            Some(None) => Err(Error::DeletedVertex(v)),
            Some(Some(p)) => Ok(*p),
        }
    }

    pub(crate) fn resolve_op(&self, op: GraphOp) -> Result<GraphOp> {
        let (a, b) = op.vertices();
        let ra = self.resolve(a)?;
        let rb = b.map(|b| self.resolve(b)).transpose()?;
        Ok(op.map(|x| if x == a { ra } else { rb.unwrap_or(x) }))
    }

    pub(crate) fn remove(&mut self, v: usize) {
        let p = self.pos[v].take().expect("vertex already removed");
        for q in self.pos.iter_mut().flatten() {
            if *q > p {
                *q -= 1;
            }
        }
    }
}

/// Applies every op of `trace` to the empty graph, resolving original indices
/// through deletions.
pub fn replay(trace: &OpTrace) -> Result<Graph> {
    let mut g = Graph::empty(trace.initial);
    let mut live = LiveIndex::new(trace.initial);
    for (step, &op) in trace.ops.iter().enumerate() {
        let wrap = |e| Error::Replay { step, reason: Box::new(e) };
        let local = live.resolve_op(op).map_err(wrap)?;
        g.apply_op_mut(local).map_err(wrap)?;
        if let GraphOp::Delete(v) = op {
            live.remove(v);
        }
    }
    Ok(g)
}
