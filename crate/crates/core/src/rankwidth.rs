//! Cut-rank, rank-decompositions, exact and heuristic rank-width, and the
//! search for small dependent vertex sets.

use std::fmt::Write as _;

use crate::codes;
use crate::error::{Error, Result};
use crate::f2linalg::{find_dependent_row, rank_u64, BitMatrix};
use crate::graph::{membership, Graph};

/// Largest vertex count accepted by [`exact_rankwidth`].
pub const EXACT_GUARD: usize = 13;

fn complement_mask(g: &Graph, in_s: &[bool]) -> Vec<u64> {
    let mut mask = vec![0u64; g.n().div_ceil(64)];
    for v in (0..g.n()).filter(|&v| !in_s[v]) {
        mask[v / 64] |= 1 << (v % 64);
    }
    mask
}

/// The bipartite adjacency matrix between `s` and its complement, with the
/// columns of `s` zeroed instead of removed (rank is unaffected).
fn cut_matrix(g: &Graph, s: &[usize]) -> BitMatrix {
    if g.n() == 0 || s.is_empty() {
        return BitMatrix::zeros(s.len(), g.n());
    }
    let in_s = membership(g.n(), s);
    g.adjacency().masked_rows(s, &complement_mask(g, &in_s))
}

/// GF(2) rank of the adjacency matrix between `s` and `V \ s`.
pub fn cutrank(g: &Graph, s: &[usize]) -> Result<usize> {
    for &v in s {
        g.check(v)?;
    }
    let mut sorted = s.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    Ok(cut_matrix(g, &sorted).rank())
}

fn adjacency_words(g: &Graph) -> Vec<u64> {
    debug_assert!(g.n() <= 64);
    (0..g.n()).map(|v| g.adjacency().row(v)[0]).collect()
}

fn cutrank_mask(rows: &[u64], s: u64, scratch: &mut Vec<u64>) -> usize {
    scratch.clear();
    let outside = !s;
    let mut bits = s;
    while bits != 0 {
        let v = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        scratch.push(rows[v] & outside);
    }
    rank_u64(scratch)
}

/// A subcubic tree whose leaves are in bijection with the vertices of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankDecomposition {
    adj: Vec<Vec<usize>>,
    leaf_of: Vec<usize>,
}

impl RankDecomposition {
    /// Builds a decomposition from tree adjacency lists and the leaf of each vertex.
    pub fn new(adj: Vec<Vec<usize>>, leaf_of: Vec<usize>) -> Result<Self> {
        let d = RankDecomposition { adj, leaf_of };
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidDecomposition(m.to_string()));
        let nodes = self.adj.len();
        let n = self.leaf_of.len();
        if n == 0 {
            return if nodes == 0 { Ok(()) } else { bad("tree without vertices") };
        }
        if n >= 2 && nodes < 2 {
            return bad("tree needs at least two nodes");
        }
        let mut degree_sum = 0;
        for (x, nb) in self.adj.iter().enumerate() {
            if nb.len() > 3 {
                return bad(&format!("node {x} has degree {}", nb.len()));
            }
            for &y in nb {
                if y >= nodes || y == x || !self.adj[y].contains(&x) {
                    return bad(&format!("edge {x}-{y} is not a symmetric tree edge"));
                }
            }
            degree_sum += nb.len();
        }
        if degree_sum != 2 * (nodes - 1) {
            return bad("edge count is not nodes - 1");
        }
        let mut seen = vec![false; nodes];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &y in &self.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return bad("tree is disconnected");
        }
        let mut owner = vec![None; nodes];
        for (v, &leaf) in self.leaf_of.iter().enumerate() {
            if leaf >= nodes || self.adj[leaf].len() > 1 {
                return bad(&format!("vertex {v} is not mapped to a leaf"));
            }
            if owner[leaf].replace(v).is_some() {
                return bad(&format!("leaf {leaf} is shared"));
            }
        }
        if (0..nodes).any(|x| self.adj[x].len() <= 1 && owner[x].is_none()) {
            return bad("a leaf carries no vertex");
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.leaf_of.len()
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adj[node]
    }

    pub fn leaf_of(&self, v: usize) -> usize {
        self.leaf_of[v]
    }

    /// Tree edges `(a, b)` with `a < b`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, nb) in self.adj.iter().enumerate() {
            for &b in nb {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    fn vertex_at(&self) -> Vec<Option<usize>> {
        let mut at = vec![None; self.adj.len()];
        for (v, &leaf) in self.leaf_of.iter().enumerate() {
            at[leaf] = Some(v);
        }
        at
    }

    /// Graph vertices on the `b` side of tree edge `{a, b}`, sorted.
    pub fn side(&self, a: usize, b: usize) -> Vec<usize> {
        let at = self.vertex_at();
        let mut out = Vec::new();
        let mut stack = vec![(b, a)];
        while let Some((x, from)) = stack.pop() {
            if let Some(v) = at[x] {
                out.push(v);
            }
            for &y in &self.adj[x] {
                if y != from {
                    stack.push((y, x));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Decomposition of the graph with vertex `v` deleted; later vertices shift down.
    /// Every remaining cut is a restriction of an old one, so width cannot grow.
    pub fn without_vertex(&self, v: usize) -> RankDecomposition {
        let n = self.leaf_of.len();
        assert!(v < n);
        if n == 1 {
            return RankDecomposition { adj: Vec::new(), leaf_of: Vec::new() };
        }
        let mut adj = self.adj.clone();
        let mut carries = vec![false; adj.len()];
        for (u, &leaf) in self.leaf_of.iter().enumerate() {
            carries[leaf] = u != v;
        }
        let mut dead = vec![false; adj.len()];
        // prune vertex-free leaves and splice out vertex-free degree-2 nodes
        let mut work = vec![self.leaf_of[v]];
        while let Some(x) = work.pop() {
            if dead[x] || carries[x] {
                continue;
            }
            match adj[x].len() {
                0 | 1 => {
                    dead[x] = true;
                    if let Some(&p) = adj[x].first() {
                        adj[p].retain(|&y| y != x);
                        work.push(p);
                    }
                    adj[x].clear();
                }
                2 => {
                    let (a, b) = (adj[x][0], adj[x][1]);
                    for (from, to) in [(a, b), (b, a)] {
                        for e in adj[from].iter_mut() {
                            if *e == x {
                                *e = to;
                            }
                        }
                    }
                    adj[x].clear();
                    dead[x] = true;
                }
                _ => {}
            }
        }
        let mut new_id = vec![usize::MAX; adj.len()];
        let mut next = 0;
        for x in 0..adj.len() {
            if !dead[x] {
                new_id[x] = next;
                next += 1;
            }
        }
        let adj = (0..adj.len()).filter(|&x| !dead[x]).map(|x| adj[x].iter().map(|&y| new_id[y]).collect()).collect();
        let leaf_of = (0..n).filter(|&u| u != v).map(|u| new_id[self.leaf_of[u]]).collect();
        RankDecomposition { adj, leaf_of }
    }

    /// Caterpillar on the given vertex order.
    pub fn caterpillar(order: &[usize]) -> RankDecomposition {
        let n = order.len();
        let mut leaf_of = vec![0; n];
        match n {
            0 => return RankDecomposition { adj: Vec::new(), leaf_of },
            1 => return RankDecomposition { adj: vec![Vec::new()], leaf_of },
            2 => {
                leaf_of[order[0]] = 0;
                leaf_of[order[1]] = 1;
                return RankDecomposition { adj: vec![vec![1], vec![0]], leaf_of };
            }
            _ => {}
        }
        // leaves 0..n, then a spine path on nodes n..2n-2
        let spine = n - 2;
        let mut adj = vec![Vec::new(); n + spine];
        let link = |a: usize, b: usize, adj: &mut Vec<Vec<usize>>| {
            adj[a].push(b);
            adj[b].push(a);
        };
        for (i, &v) in order.iter().enumerate() {
            leaf_of[v] = i;
            let s = n + (i.max(1) - 1).min(spine - 1);
            link(i, s, &mut adj);
        }
        for s in 0..spine.saturating_sub(1) {
            link(n + s, n + s + 1, &mut adj);
        }
        RankDecomposition { adj, leaf_of }
    }

    /// Parenthesized leaf tree, rooted at the lowest-index internal node.
    pub fn to_newick(&self) -> String {
        let at = self.vertex_at();
        match self.adj.len() {
            0 => return ";".into(),
            1 => return format!("{};", at[0].unwrap_or(0)),
            _ => {}
        }
        let mut out = String::new();
        match (0..self.adj.len()).find(|&x| self.adj[x].len() > 1) {
            Some(root) => self.write_subtree(root, usize::MAX, &at, &mut out),
            None => {
                let (a, b) = (at[0].unwrap_or(0), at[1].unwrap_or(0));
                let _ = write!(out, "({},{})", a.min(b), a.max(b));
            }
        }
        out.push(';');
        out
    }

    fn min_vertex(&self, x: usize, from: usize, at: &[Option<usize>]) -> usize {
        let mut best = at[x].unwrap_or(usize::MAX);
        for &y in &self.adj[x] {
            if y != from {
                best = best.min(self.min_vertex(y, x, at));
            }
        }
        best
    }

    fn write_subtree(&self, x: usize, from: usize, at: &[Option<usize>], out: &mut String) {
        if let Some(v) = at[x] {
            let _ = write!(out, "{v}");
            return;
        }
        let mut kids: Vec<(usize, usize)> =
            self.adj[x].iter().filter(|&&y| y != from).map(|&y| (self.min_vertex(y, x, at), y)).collect();
        kids.sort_unstable();
        out.push('(');
        for (i, &(_, y)) in kids.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            self.write_subtree(y, x, at, out);
        }
        out.push(')');
    }
}

/// Maximum cut-rank over the tree edges of `d`.
pub fn width(g: &Graph, d: &RankDecomposition) -> Result<usize> {
    if d.vertex_count() != g.n() {
        return Err(Error::InvalidDecomposition(format!(
            "decomposition has {} leaves but the graph has {} vertices",
            d.vertex_count(),
            g.n()
        )));
    }
    d.validate()?;
    let mut best = 0;
    for (a, b) in d.edges() {
        best = best.max(cutrank(g, &d.side(a, b))?);
    }
    Ok(best)
}

/// Optimal rank-width by dynamic programming over vertex subsets.
///
/// Returns no decomposition when `n <= 1`.
pub fn exact_rankwidth(g: &Graph) -> Result<(usize, Option<RankDecomposition>)> {
    exact_rankwidth_guarded(g, EXACT_GUARD)
}

pub fn exact_rankwidth_guarded(g: &Graph, max_n: usize) -> Result<(usize, Option<RankDecomposition>)> {
    let n = g.n();
    if n > max_n.min(20) {
        return Err(Error::GuardExceeded { what: "exact_rankwidth", n, max: max_n.min(20) });
    }
    if n <= 1 {
        return Ok((0, None));
    }
    let rows = adjacency_words(g);
    let full: u32 = (1u32 << n) - 1;
    let size = 1usize << n;
    let mut cr = vec![0u8; size];
    let mut scratch = Vec::with_capacity(n);
    for s in 1..size {
        cr[s] = cutrank_mask(&rows, s as u64, &mut scratch) as u8;
    }
    let mut w = vec![u8::MAX; size];
    let mut split = vec![0u32; size];
    for s in 1..=full {
        if s.count_ones() == 1 {
            w[s as usize] = cr[s as usize];
            continue;
        }
        let low = s & s.wrapping_neg();
        let rest = s ^ low;
        let mut best = u8::MAX;
        let mut best_a = 0;
        // submasks A of S that contain the lowest bit, excluding S itself
        let mut sub = rest;
        loop {
            let a = low | sub;
            if a != s {
                let val = w[a as usize].max(w[(s ^ a) as usize]);
                if val < best || (val == best && a < best_a) {
                    best = val;
                    best_a = a;
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        w[s as usize] = best.max(cr[s as usize]);
        split[s as usize] = best_a;
    }
    // assemble the tree: each split of a proper subset gets an internal node
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut leaf_of = vec![0; n];
    for (v, l) in leaf_of.iter_mut().enumerate() {
        *l = v;
    }
    fn build(s: u32, split: &[u32], adj: &mut Vec<Vec<usize>>) -> usize {
        if s.count_ones() == 1 {
            return s.trailing_zeros() as usize;
        }
        let a = split[s as usize];
        let left = build(a, split, adj);
        let right = build(s ^ a, split, adj);
        let node = adj.len();
        adj.push(vec![left, right]);
        adj[left].push(node);
        adj[right].push(node);
        node
    }
    let a = split[full as usize];
    let left = build(a, &split, &mut adj);
    let right = build(full ^ a, &split, &mut adj);
    adj[left].push(right);
    adj[right].push(left);
    let d = RankDecomposition::new(adj, leaf_of)?;
    Ok((w[full as usize] as usize, Some(d)))
}

/// Caterpillar decomposition grown by repeatedly appending the vertex that
/// keeps the prefix cut-rank smallest (lowest index on ties).
pub fn greedy_decomposition(g: &Graph) -> Result<RankDecomposition> {
    let n = g.n();
    if n < 2 {
        return Err(Error::Precondition("greedy decomposition needs at least two vertices".into()));
    }
    let start = (0..n).min_by_key(|&v| (g.degree(v) > 0) as usize).unwrap_or(0);
    let mut order = vec![start];
    let mut in_prefix = vec![false; n];
    in_prefix[start] = true;
    while order.len() < n {
        let mut best = (usize::MAX, usize::MAX);
        for v in (0..n).filter(|&v| !in_prefix[v]) {
            order.push(v);
            let r = cut_matrix_sorted(g, &order).rank();
            order.pop();
            if r < best.0 {
                best = (r, v);
            }
        }
        order.push(best.1);
        in_prefix[best.1] = true;
    }
    Ok(RankDecomposition::caterpillar(&order))
}

fn cut_matrix_sorted(g: &Graph, s: &[usize]) -> BitMatrix {
    if s.is_empty() {
        return BitMatrix::zeros(0, g.n());
    }
    let in_s = membership(g.n(), s);
    g.adjacency().masked_rows(s, &complement_mask(g, &in_s))
}

/// A tree edge together with the vertices on one of its sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalancedEdge {
    pub edge: (usize, usize),
    pub side: Vec<usize>,
}

/// Finds a tree edge with between `r + 1` and `2r` vertices on one side.
pub fn find_balanced_edge(d: &RankDecomposition, r: usize) -> Result<BalancedEdge> {
    let n = d.vertex_count();
    if r == 0 || n < 3 * r {
        return Err(Error::Precondition(format!("balanced edge needs r >= 1 and n >= 3r (n={n}, r={r})")));
    }
    let root = (0..d.node_count())
        .find(|&x| d.neighbors(x).len() > 1)
        .ok_or_else(|| Error::Precondition("tree has no internal node".into()))?;
    // leaf counts of every subtree hanging below `root`
    let at = d.vertex_at();
    let mut parent = vec![usize::MAX; d.node_count()];
    let mut order = vec![root];
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        for &y in d.neighbors(x) {
            if y != parent[x] {
                parent[y] = x;
                order.push(y);
            }
        }
        i += 1;
    }
    let mut leaves = vec![0usize; d.node_count()];
    for &x in order.iter().rev() {
        leaves[x] += at[x].is_some() as usize;
        if parent[x] != usize::MAX {
            leaves[parent[x]] += leaves[x];
        }
    }
    let mut a = root;
    loop {
        let b = d
            .neighbors(a)
            .iter()
            .copied()
            .filter(|&y| y != parent[a])
            .max_by_key(|&y| (leaves[y], std::cmp::Reverse(y)))
            .expect("internal node has a child");
        if leaves[b] <= 2 * r {
            let (edge, side) = if leaves[b] > r { ((a, b), d.side(a, b)) } else { ((b, a), d.side(b, a)) };
            if side.len() <= r || side.len() > 2 * r {
                return Err(Error::Precondition("no balanced edge found".into()));
            }
            return Ok(BalancedEdge { edge, side });
        }
        a = b;
    }
}

/// A vertex set whose cut-rank is below its size, with a dependent-row certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependentSet {
    /// Sorted vertex set `S`.
    pub vertices: Vec<usize>,
    pub cutrank: usize,
    /// Vertex whose row over `V \ S` is the sum of the rows of `combination`.
    pub witness: usize,
    pub combination: Vec<usize>,
}

impl DependentSet {
    /// Certifies `s` as dependent, or returns `None` when its rows are independent.
    pub fn from_vertices(g: &Graph, s: &[usize]) -> Option<DependentSet> {
        let mut vertices = s.to_vec();
        vertices.sort_unstable();
        vertices.dedup();
        let m = cut_matrix(g, &vertices);
        let dep = find_dependent_row(&m)?;
        Some(DependentSet {
            cutrank: m.rank(),
            witness: vertices[dep.row],
            combination: dep.combination.iter().map(|&i| vertices[i]).collect(),
            vertices,
        })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Checks the certificate against `g`.
    pub fn validate(&self, g: &Graph) -> bool {
        if self.vertices.iter().any(|&v| v >= g.n()) || !self.vertices.contains(&self.witness) {
            return false;
        }
        if self.combination.iter().any(|w| *w == self.witness || !self.vertices.contains(w)) {
            return false;
        }
        let in_s = membership(g.n(), &self.vertices);
        let row_ok = (0..g.n()).filter(|&u| !in_s[u]).all(|u| {
            let sum = self.combination.iter().filter(|&&w| g.has_edge(w, u)).count() % 2 == 1;
            sum == g.has_edge(self.witness, u)
        });
        row_ok && cutrank(g, &self.vertices).ok() == Some(self.cutrank) && self.cutrank < self.vertices.len()
    }
}

/// Drops vertices from a dependent set while more than two rows are redundant,
/// each time removing the vertex that yields the smallest new cut-rank.
pub fn shrink_dependent(g: &Graph, s: &[usize]) -> Result<DependentSet> {
    let mut cur: Vec<usize> = s.to_vec();
    cur.sort_unstable();
    cur.dedup();
    let mut rank = cutrank(g, &cur)?;
    if rank >= cur.len() {
        return Err(Error::Precondition("set is not dependent".into()));
    }
    while cur.len() - rank > 2 {
        let mut best = (usize::MAX, 0);
        for i in 0..cur.len() {
            let mut t = cur.clone();
            t.remove(i);
            let r = cut_matrix_sorted(g, &t).rank();
            if r < best.0 {
                best = (r, i);
            }
        }
        cur.remove(best.1);
        rank = best.0;
    }
    Ok(DependentSet::from_vertices(g, &cur).expect("shrinking keeps the set dependent"))
}

/// How [`find_dependent_set`] searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DependentStrategy {
    RankwidthGuided,
    CodeGuided,
    TrivialHalf,
}

/// Any ⌊n/2⌋+1 vertices: more rows than columns.
pub fn trivial_half(g: &Graph) -> DependentSet {
    let k = g.n() / 2 + 1;
    let s: Vec<usize> = (0..k).collect();
    DependentSet::from_vertices(g, &s).expect("more rows than columns")
}

/// A small pendant pair, twin pair or isolated vertex when one exists.
pub fn tiny_dependent_set(g: &Graph) -> Option<DependentSet> {
    let n = g.n();
    if let Some(v) = (0..n).find(|&v| g.degree(v) == 0) {
        return DependentSet::from_vertices(g, &[v]);
    }
    for a in 0..n {
        for b in a + 1..n {
            if let Some(d) = DependentSet::from_vertices(g, &[a, b]) {
                return Some(d);
            }
        }
    }
    None
}

/// Decomposition used by the rank-width guided search: exact up to `max_exact`
/// vertices, greedy caterpillar beyond.
pub fn decomposition_for(g: &Graph, max_exact: usize) -> Result<(usize, RankDecomposition)> {
    if g.n() <= max_exact.min(EXACT_GUARD) {
        let (r, d) = exact_rankwidth(g)?;
        if let Some(d) = d {
            return Ok((r, d));
        }
    }
    let d = greedy_decomposition(g)?;
    Ok((width(g, &d)?, d))
}

/// A dependent set through a balanced cut of `d` followed by shrinking,
/// or `None` when `n < 3r`.
pub fn dependent_from_decomposition(g: &Graph, d: &RankDecomposition, r: usize) -> Result<Option<DependentSet>> {
    if r == 0 {
        return Ok(DependentSet::from_vertices(g, &[0]));
    }
    if g.n() < 3 * r {
        return Ok(None);
    }
    let cut = find_balanced_edge(d, r)?;
    shrink_dependent(g, &cut.side).map(Some)
}

pub fn find_dependent_set(g: &Graph, strategy: DependentStrategy) -> Result<DependentSet> {
    if g.n() < 2 {
        return Err(Error::Precondition("dependent-set search needs at least two vertices".into()));
    }
    match strategy {
        DependentStrategy::TrivialHalf => Ok(trivial_half(g)),
        DependentStrategy::CodeGuided => codes::dependent_set_from_code(g),
        DependentStrategy::RankwidthGuided => {
            let (r, d) = decomposition_for(g, EXACT_GUARD)?;
            Ok(dependent_from_decomposition(g, &d, r)?.unwrap_or_else(|| trivial_half(g)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphOp;
    use proptest::prelude::*;

    fn arb_graph(min_n: usize, max_n: usize) -> impl Strategy<Value = Graph> {
        (min_n..=max_n).prop_flat_map(|n| {
            prop::collection::vec(any::<bool>(), n * (n.max(1) - 1) / 2).prop_map(move |bits| {
                let mut edges = Vec::new();
                let mut k = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if bits[k] {
                            edges.push((u, v));
                        }
                        k += 1;
                    }
                }
                Graph::from_edges(n, &edges).unwrap()
            })
        })
    }

    /// Independent oracle: brute-force rank by enumerating row combinations.
    fn brute_cutrank(g: &Graph, s: &[usize]) -> usize {
        let outside: Vec<usize> = (0..g.n()).filter(|v| !s.contains(v)).collect();
        let rows: Vec<Vec<bool>> = s.iter().map(|&v| outside.iter().map(|&u| g.has_edge(v, u)).collect()).collect();
        let mut span = std::collections::HashSet::new();
        for mask in 0u32..(1 << rows.len()) {
            let mut acc = vec![false; outside.len()];
            for (i, r) in rows.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    for (a, b) in acc.iter_mut().zip(r) {
                        *a ^= b;
                    }
                }
            }
            span.insert(acc);
        }
        span.len().trailing_zeros() as usize
    }

    #[test]
    fn cutrank_examples() {
        let c4 = Graph::cycle(4);
        assert_eq!(cutrank(&c4, &[]).unwrap(), 0);
        assert_eq!(cutrank(&c4, &[0, 1]).unwrap(), 2);
        assert_eq!(cutrank(&c4, &[0, 2]).unwrap(), 1);
        assert!(cutrank(&c4, &[4]).is_err());
    }

    #[test]
    fn width_examples() {
        let star = Graph::star(3);
        let cat = RankDecomposition::caterpillar(&[0, 1, 2, 3]);
        assert_eq!(width(&star, &cat).unwrap(), 1);
        // cherry tree pairing {0,2} and {1,3}
        let adj = vec![vec![4], vec![5], vec![4], vec![5], vec![0, 2, 5], vec![1, 3, 4]];
        let cherry = RankDecomposition::new(adj, vec![0, 1, 2, 3]).unwrap();
        assert_eq!(cherry.edges().len(), 5);
        assert_eq!(width(&Graph::cycle(4), &cherry).unwrap(), 1);
        let k2 = RankDecomposition::caterpillar(&[0, 1]);
        assert_eq!(width(&Graph::complete(2), &k2).unwrap(), 1);
    }

    #[test]
    fn invalid_decompositions_rejected() {
        // degree-4 node
        let adj = vec![vec![4], vec![4], vec![4], vec![4], vec![0, 1, 2, 3]];
        assert!(RankDecomposition::new(adj, vec![0, 1, 2, 3]).is_err());
        // vertex mapped to an internal node
        let adj = vec![vec![1], vec![0, 2], vec![1]];
        assert!(RankDecomposition::new(adj, vec![0, 1]).is_err());
        // cycle
        let adj = vec![vec![1, 2], vec![0, 2], vec![0, 1]];
        assert!(RankDecomposition::new(adj, vec![0, 1, 2]).is_err());
    }

    #[test]
    fn exact_examples() {
        for n in 2..9 {
            assert_eq!(exact_rankwidth(&Graph::star(n - 1)).unwrap().0, 1);
        }
        assert_eq!(exact_rankwidth(&Graph::cycle(5)).unwrap().0, 2);
        assert_eq!(exact_rankwidth(&Graph::cycle(4)).unwrap().0, 1);
        assert_eq!(exact_rankwidth(&Graph::empty(1)).unwrap(), (0, None));
        assert_eq!(exact_rankwidth(&Graph::empty(6)).unwrap().0, 0);
        assert!(exact_rankwidth(&Graph::empty(14)).is_err());
        let (r, d) = exact_rankwidth(&Graph::cycle(7)).unwrap();
        assert_eq!(width(&Graph::cycle(7), &d.unwrap()).unwrap(), r);
    }

    #[test]
    fn greedy_examples() {
        let d = greedy_decomposition(&Graph::empty(5)).unwrap();
        assert_eq!(width(&Graph::empty(5), &d).unwrap(), 0);
        let k5 = Graph::complete(5);
        assert!(width(&k5, &greedy_decomposition(&k5).unwrap()).unwrap() <= 1);
        assert!(greedy_decomposition(&Graph::empty(1)).is_err());
    }

    #[test]
    fn newick_output() {
        assert_eq!(RankDecomposition::caterpillar(&[0, 1]).to_newick(), "(0,1);");
        assert_eq!(RankDecomposition::caterpillar(&[2, 0, 1]).to_newick(), "(0,1,2);");
        let adj = vec![vec![4], vec![5], vec![4], vec![5], vec![0, 2, 5], vec![1, 3, 4]];
        let cherry = RankDecomposition::new(adj, vec![0, 1, 2, 3]).unwrap();
        assert_eq!(cherry.to_newick(), "(0,(1,3),2);");
    }

    fn check_balanced(d: &RankDecomposition, r: usize) {
        let e = find_balanced_edge(d, r).unwrap();
        assert!(d.neighbors(e.edge.0).contains(&e.edge.1));
        assert_eq!(e.side, d.side(e.edge.0, e.edge.1));
        assert!(e.side.len() > r && e.side.len() <= 2 * r, "{:?}", e);
    }

    #[test]
    fn balanced_edge_examples() {
        let adj = vec![vec![4], vec![4], vec![5], vec![5], vec![0, 1, 5], vec![2, 3, 4]];
        let cherry = RankDecomposition::new(adj, vec![0, 1, 2, 3]).unwrap();
        let e = find_balanced_edge(&cherry, 1).unwrap();
        assert_eq!(e.side.len(), 2);
        // three leaves on one node: the corner case where every branch has r leaves
        let cat3 = RankDecomposition::caterpillar(&[0, 1, 2]);
        let e = find_balanced_edge(&cat3, 1).unwrap();
        assert_eq!(e.side.len(), 2);
        // balanced binary tree on 8 leaves: leaves 0..8, internal 8..14
        let mut adj = vec![Vec::new(); 14];
        let mut link = |a: usize, b: usize| {
            adj[a].push(b);
            adj[b].push(a);
        };
        for i in 0..4 {
            link(2 * i, 8 + i);
            link(2 * i + 1, 8 + i);
        }
        link(8, 12);
        link(9, 12);
        link(10, 13);
        link(11, 13);
        link(12, 13);
        let bal = RankDecomposition::new(adj, (0..8).collect()).unwrap();
        check_balanced(&bal, 2);
        assert!(find_balanced_edge(&cat3, 2).is_err());
    }

    #[test]
    fn shrink_examples() {
        let p3 = Graph::path(3);
        let d = shrink_dependent(&p3, &[0, 2]).unwrap();
        assert_eq!(d.vertices, vec![0, 2]);
        let g = Graph::from_edges(5, &[(0, 3), (1, 3), (2, 4)]).unwrap();
        // S = {0,1,2}: rows over {3,4} are 10,10,01 -> rank 2, gap 1
        assert_eq!(shrink_dependent(&g, &[0, 1, 2]).unwrap().len(), 3);
        let e = Graph::empty(6);
        let d = shrink_dependent(&e, &[0, 1, 2, 3, 4, 5]).unwrap();
        assert!(d.len() <= 4 && d.validate(&e));
        assert!(shrink_dependent(&Graph::complete(2), &[0]).is_err());
    }

    #[test]
    fn find_dependent_set_examples() {
        let star = Graph::star(4);
        let d = find_dependent_set(&star, DependentStrategy::RankwidthGuided).unwrap();
        assert_eq!(d.len(), 2);
        assert!(d.cutrank <= 1 && d.validate(&star));
        let g = Graph::cycle(5);
        let d = find_dependent_set(&g, DependentStrategy::TrivialHalf).unwrap();
        assert_eq!(d.len(), 3);
        assert!(d.validate(&g));
        let c6 = Graph::cycle(6);
        let d = find_dependent_set(&c6, DependentStrategy::CodeGuided).unwrap();
        assert!(d.validate(&c6));
    }

    #[test]
    fn every_four_vertex_graph_has_width_at_most_one() {
        for mask in 0u32..64 {
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..4 {
                for v in u + 1..4 {
                    if mask >> k & 1 == 1 {
                        edges.push((u, v));
                    }
                    k += 1;
                }
            }
            let g = Graph::from_edges(4, &edges).unwrap();
            let r = exact_rankwidth(&g).unwrap().0;
            assert!(r <= 1);
            assert_eq!(r == 1, !edges.is_empty());
        }
    }

    proptest! {
        #[test]
        fn cutrank_matches_brute_force(g in arb_graph(1, 9), bits in any::<u16>()) {
            let s: Vec<usize> = (0..g.n()).filter(|&v| bits >> v & 1 == 1).collect();
            let comp: Vec<usize> = (0..g.n()).filter(|&v| bits >> v & 1 == 0).collect();
            let r = cutrank(&g, &s).unwrap();
            prop_assert_eq!(r, brute_cutrank(&g, &s));
            prop_assert_eq!(r, cutrank(&g, &comp).unwrap());
        }

        #[test]
        fn cutrank_invariant_under_lc(g in arb_graph(1, 10), bits in any::<u16>(), v in 0usize..10) {
            let s: Vec<usize> = (0..g.n()).filter(|&u| bits >> u & 1 == 1).collect();
            let h = g.local_complement(v % g.n()).unwrap();
            prop_assert_eq!(cutrank(&g, &s).unwrap(), cutrank(&h, &s).unwrap());
        }

        #[test]
        fn monotone_under_induced_subgraphs(g in arb_graph(2, 8), keep in any::<u8>(), bits in any::<u8>()) {
            let w: Vec<usize> = (0..g.n()).filter(|&u| keep >> u & 1 == 1).collect();
            let h = g.induced_subgraph(&w);
            let s_local: Vec<usize> = (0..w.len()).filter(|&i| bits >> i & 1 == 1).collect();
            let s_global: Vec<usize> = s_local.iter().map(|&i| w[i]).collect();
            prop_assert!(cutrank(&h, &s_local).unwrap() <= cutrank(&g, &s_global).unwrap());
            prop_assert!(exact_rankwidth(&h).unwrap().0 <= exact_rankwidth(&g).unwrap().0);
        }

        #[test]
        fn exact_is_optimal_witness_and_below_greedy(g in arb_graph(2, 9)) {
            let (r, d) = exact_rankwidth(&g).unwrap();
            prop_assert_eq!(width(&g, d.as_ref().unwrap()).unwrap(), r);
            let greedy = greedy_decomposition(&g).unwrap();
            prop_assert!(r <= width(&g, &greedy).unwrap());
        }

        #[test]
        fn removing_a_leaf_keeps_a_valid_narrower_decomposition(g in arb_graph(2, 9), v in 0usize..9) {
            let v = v % g.n();
            let (r, d) = exact_rankwidth(&g).unwrap();
            let d2 = d.unwrap().without_vertex(v);
            let h = g.delete_vertex(v).unwrap();
            if h.n() >= 2 {
                prop_assert!(width(&h, &d2).unwrap() <= r);
            }
        }

        #[test]
        fn balanced_edge_on_caterpillars(n in 3usize..40, r in 1usize..13) {
            prop_assume!(n >= 3 * r);
            let order: Vec<usize> = (0..n).rev().collect();
            check_balanced(&RankDecomposition::caterpillar(&order), r);
        }

        #[test]
        fn dependent_sets_validate(g in arb_graph(2, 12)) {
            for strategy in [DependentStrategy::RankwidthGuided, DependentStrategy::CodeGuided, DependentStrategy::TrivialHalf] {
                let d = find_dependent_set(&g, strategy).unwrap();
                prop_assert!(d.validate(&g));
            }
        }

        #[test]
        fn shrink_respects_size_bound(g in arb_graph(2, 10), bits in any::<u16>()) {
            let s: Vec<usize> = (0..g.n()).filter(|&u| bits >> u & 1 == 1).collect();
            let k = cutrank(&g, &s).unwrap();
            prop_assume!(k < s.len());
            let t = shrink_dependent(&g, &s).unwrap();
            prop_assert!(t.validate(&g));
            prop_assert!(t.len() <= (k + s.len() + 2) / 2);
            prop_assert!(t.vertices.iter().all(|v| s.contains(v)));
        }

        #[test]
        fn cost_one_ops_move_cutrank_by_at_most_one(g in arb_graph(2, 9), bits in any::<u16>(), a in 0usize..9, b in 0usize..9, kind in 0u8..3) {
            let (v, w) = (a % g.n(), b % g.n());
            prop_assume!(v != w);
            let op = match kind {
                0 => GraphOp::Ec1(v, w),
                1 => GraphOp::Ec2(v, w),
                _ => GraphOp::Ec3(v, w),
            };
            prop_assume!(!(kind == 2 && g.has_edge(v, w)));
            let h = g.apply_op(op).unwrap();
            let s: Vec<usize> = (0..g.n()).filter(|&u| bits >> u & 1 == 1).collect();
            let (r0, r1) = (cutrank(&g, &s).unwrap(), cutrank(&h, &s).unwrap());
            if s.contains(&v) == s.contains(&w) {
                prop_assert_eq!(r0, r1);
            } else {
                prop_assert!(r0.abs_diff(r1) <= 1);
            }
        }
    }
}
