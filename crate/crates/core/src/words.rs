//! Double occurrence words and the graphs they define.
//!
//! A word of length `2n` in which each of `n` letters occurs twice gives three
//! graphs on its letters. For letters `a`, `b` with `a` first, the pair is
//! *crossing* (`abab`), *nested* (`abba`) or *disjoint* (`aabb`):
//!
//! * circle graph: crossing pairs,
//! * interval containment graph: nested pairs,
//! * interval graph: crossing or nested pairs.
//!
//! Letters are identified by dense ids `0..n`; each word also carries a
//! display name per id.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphOp, OpTrace};
use crate::rankwidth::DependentSet;
use crate::synthesis::{grow_vertex, Bounds, Strategy, SynthResult};
use crate::{bounds, rankwidth};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DOWord {
    letters: Vec<usize>,
    names: Vec<String>,
    p1: Vec<usize>,
    p2: Vec<usize>,
}

fn positions(letters: &[usize], n: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    if letters.len() != 2 * n {
        return Err(Error::MalformedWord(format!("expected {} letters for {n} names, found {}", 2 * n, letters.len())));
    }
    let mut p1 = vec![usize::MAX; n];
    let mut p2 = vec![usize::MAX; n];
    for (i, &a) in letters.iter().enumerate() {
        if a >= n {
            return Err(Error::MalformedWord(format!("letter id {a} out of range for {n} names")));
        }
        if p1[a] == usize::MAX {
            p1[a] = i;
        } else if p2[a] == usize::MAX {
            p2[a] = i;
        } else {
            return Err(Error::MalformedWord(format!("letter id {a} occurs more than twice")));
        }
    }
    if let Some(a) = (0..n).find(|&a| p2[a] == usize::MAX) {
        return Err(Error::MalformedWord(format!("letter id {a} occurs fewer than twice")));
    }
    Ok((p1, p2))
}

impl DOWord {
    /// Word over ids `0..n` named by their decimal index.
    pub fn from_letters(letters: Vec<usize>) -> Result<DOWord> {
        let n = letters.len() / 2;
        DOWord::with_names(letters, (0..n).map(|i| i.to_string()).collect())
    }

    pub fn with_names(letters: Vec<usize>, names: Vec<String>) -> Result<DOWord> {
        let (p1, p2) = positions(&letters, names.len())?;
        Ok(DOWord { letters, names, p1, p2 })
    }

    /// Parses an optional `WORD n=<count>` header followed by whitespace
    /// separated names. A single token is read as a run of one-character names.
    /// Ids follow the order of first appearance.
    pub fn parse(text: &str) -> Result<DOWord> {
        let mut declared = None;
        let mut tokens: Vec<String> = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("WORD") {
                if declared.is_some() || !tokens.is_empty() {
                    return Err(Error::MalformedWord("header must come first".into()));
                }
                let count = rest
                    .trim()
                    .strip_prefix("n=")
                    .and_then(|c| c.parse::<usize>().ok())
                    .ok_or_else(|| Error::MalformedWord(format!("bad header `{line}`")))?;
                declared = Some(count);
                continue;
            }
            tokens.extend(line.split_whitespace().map(str::to_owned));
        }
        if tokens.len() == 1 && tokens[0].chars().count() > 1 {
            tokens = tokens[0].chars().map(String::from).collect();
        }
        let mut names: Vec<String> = Vec::new();
        let mut letters = Vec::with_capacity(tokens.len());
        for t in tokens {
            let id = match names.iter().position(|x| *x == t) {
                Some(id) => id,
                None => {
                    names.push(t);
                    names.len() - 1
                }
            };
            letters.push(id);
        }
        if let Some(count) = declared {
            if count != names.len() {
                return Err(Error::MalformedWord(format!("header declares {count} names, found {}", names.len())));
            }
        }
        DOWord::with_names(letters, names)
    }

    /// Header line plus the space-separated names.
    pub fn serialize(&self) -> String {
        format!("WORD n={}\n{}\n", self.n(), self)
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Zero-based position of the first occurrence of `a`.
    pub fn p1(&self, a: usize) -> usize {
        self.p1[a]
    }

    pub fn p2(&self, a: usize) -> usize {
        self.p2[a]
    }

    /// The word with both occurrences of `v` removed; ids above `v` move down by one.
    pub fn delete_letter(&self, v: usize) -> Result<DOWord> {
        self.check(v)?;
        let letters = self.letters.iter().filter(|&&a| a != v).map(|&a| if a > v { a - 1 } else { a }).collect();
        let mut names = self.names.clone();
        names.remove(v);
        DOWord::with_names(letters, names)
    }

    /// The word with the factor strictly between the two occurrences of `v` reversed.
    pub fn reverse_between(&self, v: usize) -> Result<DOWord> {
        self.check(v)?;
        let mut letters = self.letters.clone();
        letters[self.p1[v] + 1..self.p2[v]].reverse();
        DOWord::with_names(letters, self.names.clone())
    }

    fn check(&self, v: usize) -> Result<()> {
        if v >= self.n() {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n() });
        }
        Ok(())
    }

    pub fn pattern(&self, a: usize, b: usize) -> Pattern {
        let (x, y) = if self.p1[a] < self.p1[b] { (a, b) } else { (b, a) };
        if self.p2[x] < self.p1[y] {
            Pattern::Disjoint
        } else if self.p2[x] < self.p2[y] {
            Pattern::Crossing
        } else {
            Pattern::Nested
        }
    }

    fn graph_where(&self, keep: impl Fn(Pattern) -> bool) -> Graph {
        let n = self.n();
        let mut g = Graph::empty(n);
        for a in 0..n {
            for b in a + 1..n {
                if keep(self.pattern(a, b)) {
                    g.set_edge(a, b, true);
                }
            }
        }
        g.with_labels(self.names.clone())
    }
}

impl fmt::Display for DOWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &a) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(&self.names[a])?;
        }
        Ok(())
    }
}

/// Relative order of two letters' occurrences.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pattern {
    /// `abab`
    Crossing,
    /// `abba`
    Nested,
    /// `aabb`
    Disjoint,
}

pub fn interval_graph(m: &DOWord) -> Graph {
    m.graph_where(|p| p != Pattern::Disjoint)
}

pub fn containment_graph(m: &DOWord) -> Graph {
    m.graph_where(|p| p == Pattern::Nested)
}

pub fn circle_graph(m: &DOWord) -> Graph {
    m.graph_where(|p| p == Pattern::Crossing)
}

/// A 4-regular multigraph; edge `i` joins consecutive letters `i` and `i+1` of a word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TourGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl TourGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<TourGraph> {
        if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a >= n || b >= n) {
            return Err(Error::VertexOutOfRange { vertex: a.max(b), n });
        }
        Ok(TourGraph { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Degree counting loops twice.
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().map(|&(a, b)| (a == v) as usize + (b == v) as usize).sum()
    }

    /// Edges with endpoints ordered and the list sorted, for multiset comparison.
    pub fn edge_multiset(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = self.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        e.sort_unstable();
        e
    }

    fn incidence(&self) -> Vec<Vec<(usize, usize)>> {
        let mut inc = vec![Vec::new(); self.n];
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            inc[a].push((i, b));
            if a != b {
                inc[b].push((i, a));
            }
        }
        inc
    }
}

pub fn tour_graph(m: &DOWord) -> TourGraph {
    let len = m.letters.len();
    let edges = (0..len).map(|i| (m.letters[i], m.letters[(i + 1) % len])).collect();
    TourGraph { n: m.n(), edges }
}

/// A closed walk using every allowed edge of one component exactly once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerCycle {
    /// Vertices in visiting order, starting at the start vertex; the return is implicit.
    pub vertices: Vec<usize>,
    /// `edges[i]` leads from `vertices[i]` to the next vertex.
    pub edges: Vec<usize>,
}

/// Eulerian cycle through the component of `start` in the multigraph of
/// edges not marked in `forbidden`, built by Hierholzer's method always
/// taking the lowest-index unused edge.
pub fn euler_cycle(t: &TourGraph, start: usize, forbidden: &[bool]) -> Result<EulerCycle> {
    if start >= t.n {
        return Err(Error::VertexOutOfRange { vertex: start, n: t.n });
    }
    if forbidden.len() != t.edges.len() {
        return Err(Error::Precondition("forbidden mask must cover every edge".into()));
    }
    let inc = t.incidence();
    let allowed = |e: usize| !forbidden[e];

    let mut seen = vec![false; t.n];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(u) = queue.pop_front() {
        let deg: usize = inc[u]
            .iter()
            .filter(|&&(e, _)| allowed(e))
            .map(|&(e, w)| if w == u && t.edges[e].0 == t.edges[e].1 { 2 } else { 1 })
            .sum();
        if deg % 2 == 1 {
            return Err(Error::Precondition(format!("vertex {u} has odd degree in the allowed edge set")));
        }
        for &(e, w) in &inc[u] {
            if allowed(e) && !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }

    let mut used: Vec<bool> = forbidden.to_vec();
    let mut next = vec![0usize; t.n];
    // stack of (vertex, edge used to arrive)
    let mut stack: Vec<(usize, Option<usize>)> = vec![(start, None)];
    let mut circuit: Vec<(usize, Option<usize>)> = Vec::new();
    while let Some(&(u, _)) = stack.last() {
        while next[u] < inc[u].len() && used[inc[u][next[u]].0] {
            next[u] += 1;
        }
        if let Some(&(e, w)) = inc[u].get(next[u]) {
            used[e] = true;
            stack.push((w, Some(e)));
        } else {
            circuit.push(stack.pop().expect("stack is nonempty"));
        }
    }
    circuit.reverse();
    // circuit = start, ..., start with arrival edges; drop the closing vertex
    let mut vertices = Vec::with_capacity(circuit.len().saturating_sub(1));
    let mut edges = Vec::with_capacity(vertices.capacity());
    for i in 0..circuit.len() - 1 {
        vertices.push(circuit[i].0);
        edges.push(circuit[i + 1].1.expect("every step after the first has an edge"));
    }
    if vertices.is_empty() {
        vertices.push(start);
    }
    Ok(EulerCycle { vertices, edges })
}

/// A shortest cycle in a multigraph: its vertices in order and its edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Shortest cycle, counting a loop as length one and a parallel pair as length two.
pub fn smallest_cycle(t: &TourGraph) -> Option<Cycle> {
    if let Some(e) = t.edges.iter().position(|&(a, b)| a == b) {
        return Some(Cycle { vertices: vec![t.edges[e].0], edges: vec![e] });
    }
    let key = |e: usize| {
        let (a, b) = t.edges[e];
        (a.min(b), a.max(b))
    };
    for e in 0..t.edges.len() {
        if let Some(f) = (e + 1..t.edges.len()).find(|&f| key(f) == key(e)) {
            let (a, b) = key(e);
            return Some(Cycle { vertices: vec![a, b], edges: vec![e, f] });
        }
    }
    let inc = t.incidence();
    let mut best: Option<Cycle> = None;
    for root in 0..t.n {
        let mut dist = vec![usize::MAX; t.n];
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; t.n];
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            if best.as_ref().is_some_and(|b| 2 * dist[u] + 1 >= b.len()) {
                break;
            }
            for &(e, w) in &inc[u] {
                if parent[u].is_some_and(|(pe, _)| pe == e) {
                    continue;
                }
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = Some((e, u));
                    queue.push_back(w);
                } else if parent[w].is_none_or(|(pe, _)| pe != e) {
                    let len = dist[u] + dist[w] + 1;
                    if best.as_ref().is_none_or(|b| len < b.len()) {
                        best = Some(close_cycle(&parent, u, w, e));
                    }
                }
            }
        }
    }
    best
}

fn close_cycle(parent: &[Option<(usize, usize)>], u: usize, w: usize, e: usize) -> Cycle {
    let climb = |mut x: usize| {
        let mut vs = vec![x];
        let mut es = Vec::new();
        while let Some((pe, p)) = parent[x] {
            es.push(pe);
            vs.push(p);
            x = p;
        }
        (vs, es)
    };
    let (mut vu, eu) = climb(u);
    let (mut vw, ew) = climb(w);
    // both paths end at the root; the minimal cycle meets only there
    vu.reverse();
    vw.pop();
    let vertices: Vec<usize> = vu.into_iter().chain(vw).collect();
    let edges: Vec<usize> = eu.into_iter().rev().chain(std::iter::once(e)).chain(ew).collect();
    Cycle { vertices, edges }
}

/// Result of rerouting a word's Eulerian cycle around a shortest cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reroute {
    pub word: DOWord,
    /// Lowest vertex of the cycle; its degree in the new circle graph is below the cycle length.
    pub vertex: usize,
    pub cycle_len: usize,
}

/// An Eulerian cycle of the same tour graph in which one vertex has degree
/// at most `2⌊log₃(n+1)⌋` in the circle graph.
///
/// The new cycle first exhausts the component of `v` after the edges of a
/// shortest cycle are removed, then walks all remaining edges. Every letter
/// that alternates with `v` must appear in both halves, which only cycle
/// vertices do.
pub fn reroute_word(m: &DOWord) -> Result<Reroute> {
    let t = tour_graph(m);
    let cycle = smallest_cycle(&t).ok_or_else(|| Error::MalformedWord("empty word has no tour cycle".into()))?;
    let v = *cycle.vertices.iter().min().expect("cycles are nonempty");
    let mut forbidden = vec![false; t.edges.len()];
    for &e in &cycle.edges {
        forbidden[e] = true;
    }
    let first = euler_cycle(&t, v, &forbidden)?;
    let mut rest_forbidden = vec![false; t.edges.len()];
    for &e in &first.edges {
        rest_forbidden[e] = true;
    }
    let second = euler_cycle(&t, v, &rest_forbidden)?;
    if first.edges.len() + second.edges.len() != t.edges.len() {
        return Err(Error::Precondition("tour graph is not connected".into()));
    }
    let letters: Vec<usize> = first.vertices.into_iter().chain(second.vertices).collect();
    Ok(Reroute { word: DOWord::with_names(letters, m.names.clone())?, vertex: v, cycle_len: cycle.len() })
}

/// Word targets beyond this size skip the heuristic rank-width in their bounds.
pub const WORD_BOUNDS_LIMIT: usize = 64;

fn word_result(g: &Graph, trace: OpTrace, per_vertex_costs: Vec<usize>, strategy: Strategy) -> Result<SynthResult> {
    let bounds = if g.n() <= WORD_BOUNDS_LIMIT {
        Bounds::compute(g, rankwidth::EXACT_GUARD)?
    } else {
        Bounds::generic_only(g.n())
    };
    Ok(SynthResult { cost: trace.cost(), trace, per_vertex_costs, strategy, bounds })
}

fn interval_ops(m: &DOWord, z: usize, trace: &mut OpTrace) -> Vec<usize> {
    let n = m.n();
    let mut per_vertex = vec![0; n];
    for t in 0..(2 * n).saturating_sub(2) {
        let a = m.letters[t];
        if t == m.p1[a] {
            trace.ops.extend([GraphOp::Lc(z), GraphOp::Ec1(a, z), GraphOp::Lc(z)]);
        } else {
            trace.push(GraphOp::Ec1(a, z));
        }
        per_vertex[a] += 1;
    }
    trace.push(GraphOp::Delete(z));
    per_vertex
}

/// Builds the interval graph of `m` with `2n - 2` edge complementations
/// through one ancilla, which holds the currently open intervals as its
/// neighborhood and is deleted at the end.
pub fn synth_interval(m: &DOWord) -> Result<SynthResult> {
    let n = m.n();
    let mut trace = OpTrace::new(n + 1);
    let per_vertex = interval_ops(m, n, &mut trace);
    word_result(&interval_graph(m), trace, per_vertex, Strategy::Interval)
}

/// Circle-graph synthesis together with the degree exposed by each reroute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleSynth {
    pub result: SynthResult,
    /// Degree of the rerouted vertex at each removal step, in removal order.
    pub reroute_degrees: Vec<usize>,
    /// Current vertex count at each removal step.
    pub step_sizes: Vec<usize>,
}

/// Builds the circle graph of `m` with at most `2⌊log₃(n+1)⌋(n-1)` edge complementations.
pub fn synth_circle(m: &DOWord) -> Result<SynthResult> {
    Ok(synth_circle_detailed(m)?.result)
}

pub fn synth_circle_detailed(m: &DOWord) -> Result<CircleSynth> {
    let g = circle_graph(m);
    let n = m.n();
    let mut word = m.clone();
    let mut h = g.clone();
    let mut orig: Vec<usize> = (0..n).collect();
    let mut steps: Vec<Vec<GraphOp>> = Vec::new();
    let mut per_vertex_costs = vec![0; n];
    let mut reroute_degrees = Vec::new();
    let mut step_sizes = Vec::new();
    while word.n() >= 2 {
        let rr = reroute_word(&word)?;
        let rerouted = circle_graph(&rr.word);
        let mut s = rerouted.neighbors(rr.vertex);
        reroute_degrees.push(s.len());
        step_sizes.push(word.n());
        s.push(rr.vertex);
        let dep = DependentSet::from_vertices(&h, &s)
            .ok_or_else(|| Error::Precondition("rerouted neighborhood is not dependent".into()))?;
        let grow = grow_vertex(&h, &dep)?;
        per_vertex_costs[orig[grow.vertex]] = grow.cost;
        steps.push(grow.ops.iter().map(|op| op.map(|x| orig[x])).collect());
        h = h.delete_vertex(grow.vertex)?;
        word = word.delete_letter(grow.vertex)?;
        orig.remove(grow.vertex);
    }
    let mut trace = OpTrace::new(n);
    for ops in steps.into_iter().rev() {
        trace.ops.extend(ops);
    }
    Ok(CircleSynth { result: word_result(&g, trace, per_vertex_costs, Strategy::Circle)?, reroute_degrees, step_sizes })
}

/// Builds the interval containment graph of `m` as the symmetric difference
/// of its interval and circle graphs: both are built side by side and each
/// circle vertex is folded into its interval twin by one EC2 and a deletion.
pub fn synth_containment(m: &DOWord) -> Result<SynthResult> {
    let n = m.n();
    let mut trace = OpTrace::new(2 * n + 1);
    let mut per_vertex = interval_ops(m, 2 * n, &mut trace);
    let circle = synth_circle(m)?;
    trace.ops.extend(circle.trace.ops.iter().map(|op| op.map(|x| x + n)));
    for i in 0..n {
        trace.push(GraphOp::Ec2(i, n + i));
        trace.push(GraphOp::Delete(n + i));
        per_vertex[i] += circle.per_vertex_costs[i] + 1;
    }
    word_result(&containment_graph(m), trace, per_vertex, Strategy::Containment)
}

/// Cost guaranteed by [`synth_circle`].
pub fn circle_cost_bound(n: usize) -> usize {
    bounds::circle_upper(n)
}
