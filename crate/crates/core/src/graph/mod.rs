//! Simple undirected graphs on dense GF(2) adjacency matrices, with local
//! complementation, the three cost-one edge complementations, pivoting and
//! vertex deletion.

mod format;
mod trace;

pub use format::{graph6, parse_graph, parse_trace, serialize_graph, serialize_trace, GraphFormat};
#[allow(unused_imports)]
pub(crate) use trace::LiveIndex;
pub use trace::{replay, GraphOp, OpTrace};

use std::collections::{HashSet, VecDeque};
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::f2linalg::BitMatrix;

/// Default vertex-count limit for LC-orbit enumeration.
pub const ORBIT_GUARD: usize = 12;

/// A labeled simple graph. Equality and hashing look only at the adjacency matrix.
#[derive(Clone, Debug)]
pub struct Graph {
    adj: BitMatrix,
    labels: Option<Vec<String>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.adj == other.adj
    }
}

impl Eq for Graph {}

impl Hash for Graph {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.adj.hash(state);
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { adj: BitMatrix::zeros(n, n), labels: None }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.check(u)?;
            g.check(v)?;
            if u == v {
                return Err(Error::SameVertex(u));
            }
            g.adj.set(u, v, true);
            g.adj.set(v, u, true);
        }
        Ok(g)
    }

    /// Builds a graph from a symmetric matrix with zero diagonal.
    pub fn from_adjacency(adj: BitMatrix) -> Result<Self> {
        if adj.rows() != adj.cols() {
            return Err(Error::Precondition("adjacency matrix must be square".into()));
        }
        for i in 0..adj.rows() {
            if adj.get(i, i) {
                return Err(Error::Precondition(format!("self-loop at vertex {i}")));
            }
            for j in 0..i {
                if adj.get(i, j) != adj.get(j, i) {
                    return Err(Error::Precondition(format!("asymmetric entry ({i},{j})")));
                }
            }
        }
        Ok(Graph { adj, labels: None })
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in 0..u {
                g.set_edge(u, v, true);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::empty(n);
        if n >= 3 {
            for i in 0..n {
                g.set_edge(i, (i + 1) % n, true);
            }
        } else if n == 2 {
            g.set_edge(0, 1, true);
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for i in 1..n {
            g.set_edge(i - 1, i, true);
        }
        g
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        let mut g = Graph::empty(leaves + 1);
        for i in 1..=leaves {
            g.set_edge(0, i, true);
        }
        g
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n(), "one label per vertex");
        self.labels = Some(labels);
        self
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.rows()
    }

    pub fn adjacency(&self) -> &BitMatrix {
        &self.adj
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(u, v)
    }

    /// Adds or removes the edge `{u, v}`.
    ///
    /// # Panics
    /// When `u == v` or either vertex is out of range.
    pub fn set_edge(&mut self, u: usize, v: usize, present: bool) {
        assert!(u != v && u < self.n() && v < self.n(), "invalid edge {{{u}, {v}}}");
        self.adj.set(u, v, present);
        self.adj.set(v, u, present);
    }

    #[inline]
    pub(crate) fn toggle_edge(&mut self, u: usize, v: usize) {
        debug_assert_ne!(u, v);
        self.adj.toggle(u, v);
        self.adj.toggle(v, u);
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.n()).filter(|&w| self.adj.get(v, w)).collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn min_degree(&self) -> Option<usize> {
        (0..self.n()).map(|v| self.degree(v)).min()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Edges as pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n() {
            for v in u + 1..self.n() {
                if self.adj.get(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == n
    }

    pub(crate) fn check(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n() })
        }
    }

    fn check_pair(&self, v: usize, w: usize) -> Result<()> {
        self.check(v)?;
        self.check(w)?;
        if v == w {
            return Err(Error::SameVertex(v));
        }
        Ok(())
    }

    /// Complements every edge inside the neighborhood of `v`.
    pub fn local_complement(&self, v: usize) -> Result<Graph> {
        let mut g = self.clone();
        g.local_complement_mut(v)?;
        Ok(g)
    }

    pub fn local_complement_mut(&mut self, v: usize) -> Result<()> {
        self.check(v)?;
        let nb = self.neighbors(v);
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                self.toggle_edge(a, b);
            }
        }
        Ok(())
    }

    pub fn apply_op(&self, op: GraphOp) -> Result<Graph> {
        let mut g = self.clone();
        g.apply_op_mut(op)?;
        Ok(g)
    }

    pub fn apply_op_mut(&mut self, op: GraphOp) -> Result<()> {
        match op {
            GraphOp::Lc(v) => self.local_complement_mut(v),
            GraphOp::Ec1(v, w) => {
                self.check_pair(v, w)?;
                self.toggle_edge(v, w);
                Ok(())
            }
            GraphOp::Ec2(v, w) => {
                self.check_pair(v, w)?;
                // neighborhood of w is read once, before any toggling
                for u in self.neighbors(w) {
                    if u != v {
                        self.toggle_edge(v, u);
                    }
                }
                Ok(())
            }
            GraphOp::Ec3(v, w) => {
                self.check_pair(v, w)?;
                if self.has_edge(v, w) {
                    return Err(Error::Ec3OnAdjacentPair(v, w));
                }
                let nv = self.neighbors(v);
                let nw = self.neighbors(w);
                let in_v: Vec<bool> = membership(self.n(), &nv);
                let in_w: Vec<bool> = membership(self.n(), &nw);
                // each unordered pair {x,y} with x in N(v), y in N(w), not both in the intersection,
                // is toggled exactly once
                let mut toggle = BitMatrix::zeros(self.n(), self.n());
                for &x in &nv {
                    for &y in &nw {
                        if x == y || (in_w[x] && in_v[y]) {
                            continue;
                        }
                        let (a, b) = if x < y { (x, y) } else { (y, x) };
                        toggle.set(a, b, true);
                    }
                }
                for a in 0..self.n() {
                    for b in a + 1..self.n() {
                        if toggle.get(a, b) {
                            self.toggle_edge(a, b);
                        }
                    }
                }
                Ok(())
            }
            GraphOp::Delete(v) => {
                *self = self.delete_vertex(v)?;
                Ok(())
            }
        }
    }

    /// τ_v ∘ τ_w ∘ τ_v on an edge {v, w}, without any label swap.
    pub fn pivot(&self, v: usize, w: usize) -> Result<Graph> {
        self.check_pair(v, w)?;
        if !self.has_edge(v, w) {
            return Err(Error::NotAdjacent(v, w));
        }
        let mut g = self.clone();
        g.local_complement_mut(v)?;
        g.local_complement_mut(w)?;
        g.local_complement_mut(v)?;
        Ok(g)
    }

    /// Removes `v`; vertices above it shift down by one.
    pub fn delete_vertex(&self, v: usize) -> Result<Graph> {
        self.check(v)?;
        let keep: Vec<usize> = (0..self.n()).filter(|&u| u != v).collect();
        Ok(self.induced_subgraph(&keep))
    }

    /// Induced subgraph on `keep`, relabeled 0.. in the given order.
    pub fn induced_subgraph(&self, keep: &[usize]) -> Graph {
        let adj = self.adj.select(keep, keep);
        let labels = self.labels.as_ref().map(|l| keep.iter().map(|&i| l[i].clone()).collect());
        Graph { adj, labels }
    }

    /// Relabels so that vertex `v` of `self` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n());
        let mut g = Graph::empty(self.n());
        for (u, v) in self.edges() {
            g.set_edge(perm[u], perm[v], true);
        }
        g
    }

    /// Disjoint union with `other` placed on indices `self.n()..`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let n = self.n();
        let mut g = Graph::empty(n + other.n());
        for (u, v) in self.edges() {
            g.set_edge(u, v, true);
        }
        for (u, v) in other.edges() {
            g.set_edge(n + u, n + v, true);
        }
        g
    }

    /// Edge-wise symmetric difference of two graphs on the same vertex set.
    pub fn symmetric_difference(&self, other: &Graph) -> Graph {
        assert_eq!(self.n(), other.n());
        let mut g = self.clone();
        for (u, v) in other.edges() {
            g.toggle_edge(u, v);
        }
        g
    }
}

pub(crate) fn membership(n: usize, set: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in set {
        m[v] = true;
    }
    m
}

/// All labeled graphs reachable from `g` by local complementations, `g` included.
pub fn lc_orbit(g: &Graph) -> Result<HashSet<Graph>> {
    lc_orbit_guarded(g, ORBIT_GUARD)
}

pub fn lc_orbit_guarded(g: &Graph, max_n: usize) -> Result<HashSet<Graph>> {
    if g.n() > max_n {
        return Err(Error::GuardExceeded { what: "lc_orbit", n: g.n(), max: max_n });
    }
    let mut base = g.clone();
    base.labels = None;
    let mut seen = HashSet::from([base.clone()]);
    let mut queue = VecDeque::from([base]);
    while let Some(h) = queue.pop_front() {
        for v in 0..h.n() {
            if h.degree(v) < 2 {
                continue;
            }
            let next = h.local_complement(v)?;
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(seen)
}
