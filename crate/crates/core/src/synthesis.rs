//! Building a target graph vertex by vertex from dependent sets.
//!
//! The synthesizer repeatedly finds a dependent set, removes the witness
//! vertex, and recurses; the construction trace is the reverse of that
//! removal sequence, with each vertex re-inserted by a handful of cost-one
//! operations that only touch edges at the inserted vertex.

use std::fmt;
use std::str::FromStr;

use crate::bounds;
use crate::codes;
use crate::error::{Error, Result};
use crate::graph::{replay, Graph, GraphOp, OpTrace};
use crate::rankwidth::{self, cutrank, DependentSet, RankDecomposition};
use crate::Ratio;

/// Graphs up to this size use code-guided steps under [`Strategy::Auto`].
pub const AUTO_CODE_LIMIT: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Auto,
    RankwidthGuided,
    CodeGuided,
    TrivialHalf,
    /// Word-driven constructions; these only come out of the `words` module.
    Interval,
    Circle,
    Containment,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Auto => "auto",
            Strategy::RankwidthGuided => "rankwidth",
            Strategy::CodeGuided => "code",
            Strategy::TrivialHalf => "trivial",
            Strategy::Interval => "interval",
            Strategy::Circle => "circle",
            Strategy::Containment => "containment",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Strategy::Auto),
            "rankwidth" => Ok(Strategy::RankwidthGuided),
            "code" => Ok(Strategy::CodeGuided),
            "trivial" => Ok(Strategy::TrivialHalf),
            other => Err(Error::Precondition(format!("unknown strategy `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SynthOptions {
    pub strategy: Strategy,
    /// Largest graph for which rank-width is computed exactly.
    pub max_exact: usize,
}

impl Default for SynthOptions {
    fn default() -> Self {
        SynthOptions { strategy: Strategy::Auto, max_exact: rankwidth::EXACT_GUARD }
    }
}

impl SynthOptions {
    pub fn with_strategy(strategy: Strategy) -> Self {
        SynthOptions { strategy, ..Default::default() }
    }
}

/// Cost bounds attached to a synthesis run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Exact rank-width when computed, else the width of a heuristic decomposition.
    pub rankwidth: Option<usize>,
    pub rankwidth_exact: bool,
    /// `n + rw - 2`, only for connected graphs with exact rank-width.
    pub lower: Option<usize>,
    pub upper_rankwidth: Option<Ratio>,
    pub upper_generic: Ratio,
}

impl Bounds {
    pub fn compute(g: &Graph, max_exact: usize) -> Result<Bounds> {
        let n = g.n();
        let (rankwidth, exact) = if n <= 1 {
            (Some(0), true)
        } else if n <= max_exact.min(rankwidth::EXACT_GUARD) {
            (Some(rankwidth::exact_rankwidth(g)?.0), true)
        } else {
            let d = rankwidth::greedy_decomposition(g)?;
            (Some(rankwidth::width(g, &d)?), false)
        };
        let lower = match rankwidth {
            Some(r) if exact && n >= 2 && g.is_connected() => Some(bounds::lower_bound(n, r)),
            _ => None,
        };
        let upper_rankwidth = match rankwidth {
            Some(r) if exact => bounds::rankwidth_upper(n, r),
            _ => None,
        };
        Ok(Bounds {
            rankwidth,
            rankwidth_exact: exact,
            lower,
            upper_rankwidth,
            upper_generic: bounds::generic_upper(n),
        })
    }

    /// Only the bound that needs no rank-width.
    pub fn generic_only(n: usize) -> Bounds {
        Bounds {
            rankwidth: None,
            rankwidth_exact: false,
            lower: None,
            upper_rankwidth: None,
            upper_generic: bounds::generic_upper(n),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthResult {
    pub trace: OpTrace,
    pub cost: usize,
    /// Cost spent inserting each vertex, indexed by vertex.
    pub per_vertex_costs: Vec<usize>,
    pub strategy: Strategy,
    pub bounds: Bounds,
}

/// Operations that re-insert one vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grow {
    pub vertex: usize,
    /// Applied to `g` with every edge at `vertex` removed, these restore `g`.
    pub ops: Vec<GraphOp>,
    pub cost: usize,
}

/// Re-inserts the witness vertex of `dep` using at most `|S| - 1` cost-one operations.
pub fn grow_vertex(g: &Graph, dep: &DependentSet) -> Result<Grow> {
    if !dep.validate(g) {
        return Err(Error::Precondition("dependent-set witness does not hold".into()));
    }
    let v = dep.witness;
    let n = g.n();
    let mut sum = vec![false; n];
    for &w in &dep.combination {
        for u in g.neighbors(w) {
            sum[u] ^= true;
        }
    }
    let mut ops = Vec::new();
    for &w in &dep.combination {
        let flip_edge = sum[w] != g.has_edge(v, w);
        let copies = g.neighbors(w).iter().any(|&u| u != v);
        match (flip_edge, copies) {
            // toggle {v,w} and v against N(w)\{v}
            (true, true) => ops.extend([GraphOp::Lc(w), GraphOp::Ec1(v, w), GraphOp::Lc(w)]),
            (true, false) => ops.push(GraphOp::Ec1(v, w)),
            (false, true) => ops.push(GraphOp::Ec2(v, w)),
            (false, false) => {}
        }
    }
    for &u in &dep.vertices {
        if u != v && !dep.combination.contains(&u) && sum[u] != g.has_edge(v, u) {
            ops.push(GraphOp::Ec1(v, u));
        }
    }
    let cost = ops.iter().filter(|op| op.is_cost_one()).count();
    Ok(Grow { vertex: v, ops, cost })
}

/// `g` with every edge at `v` removed.
pub fn isolate(g: &Graph, v: usize) -> Graph {
    let mut h = g.clone();
    for u in g.neighbors(v) {
        h.toggle_edge(v, u);
    }
    h
}

/// Rank-width state carried across steps: the width bound and a decomposition
/// of the current graph, plus an unfinished balanced cut.
struct Guide {
    r: usize,
    d: RankDecomposition,
    carry: Vec<usize>,
}

impl Guide {
    fn remove(&mut self, v: usize) {
        self.d = self.d.without_vertex(v);
        self.carry.retain(|&u| u != v);
        for u in self.carry.iter_mut() {
            if *u > v {
                *u -= 1;
            }
        }
    }
}

fn fallback(h: &Graph) -> Result<DependentSet> {
    if h.n() <= AUTO_CODE_LIMIT {
        codes::dependent_set_from_code(h)
    } else {
        Ok(rankwidth::trivial_half(h))
    }
}

fn guided_step(h: &Graph, guide: &mut Guide) -> Result<DependentSet> {
    if let Some(d) = rankwidth::tiny_dependent_set(h) {
        return Ok(d);
    }
    if guide.carry.len() > guide.r && cutrank(h, &guide.carry)? < guide.carry.len() {
        return rankwidth::shrink_dependent(h, &guide.carry);
    }
    guide.carry.clear();
    let n = h.n();
    if guide.r >= 1 && n >= bounds::batch_start(guide.r) {
        let cut = rankwidth::find_balanced_edge(&guide.d, guide.r)?;
        guide.carry = cut.side;
        return rankwidth::shrink_dependent(h, &guide.carry);
    }
    fallback(h)
}

/// Builds `g` from the empty graph on the same vertex set.
pub fn synth(g: &Graph, opts: SynthOptions) -> Result<SynthResult> {
    let n = g.n();
    let bounds = Bounds::compute(g, opts.max_exact)?;
    let strategy = match opts.strategy {
        Strategy::Auto if n <= AUTO_CODE_LIMIT => Strategy::CodeGuided,
        Strategy::Auto => Strategy::RankwidthGuided,
        Strategy::Interval | Strategy::Circle | Strategy::Containment => {
            return Err(Error::Precondition(format!("strategy `{}` needs a word, not a graph", opts.strategy)));
        }
        s => s,
    };
    if strategy == Strategy::CodeGuided && n > codes::MIN_DISTANCE_GUARD {
        return Err(Error::GuardExceeded { what: "code-guided synthesis", n, max: codes::MIN_DISTANCE_GUARD });
    }
    let mut guide = if strategy == Strategy::RankwidthGuided && n >= 2 {
        let (r, d) = rankwidth::decomposition_for(g, opts.max_exact)?;
        Some(Guide { r, d, carry: Vec::new() })
    } else {
        None
    };

    let mut h = g.clone();
    let mut orig: Vec<usize> = (0..n).collect();
    let mut steps: Vec<Vec<GraphOp>> = Vec::new();
    let mut per_vertex_costs = vec![0; n];
    while h.n() > 2 {
        let dep = match (&mut guide, strategy) {
            (Some(guide), _) => guided_step(&h, guide)?,
            (None, Strategy::CodeGuided) => codes::dependent_set_from_code(&h)?,
            _ => rankwidth::trivial_half(&h),
        };
        let grow = grow_vertex(&h, &dep)?;
        per_vertex_costs[orig[grow.vertex]] = grow.cost;
        steps.push(grow.ops.iter().map(|op| op.map(|x| orig[x])).collect());
        h = h.delete_vertex(grow.vertex)?;
        orig.remove(grow.vertex);
        if let Some(guide) = guide.as_mut() {
            guide.remove(grow.vertex);
        }
    }
    let mut trace = OpTrace::new(n);
    if h.n() == 2 && h.has_edge(0, 1) {
        trace.push(GraphOp::Ec1(orig[0], orig[1]));
        per_vertex_costs[orig[1]] = 1;
    }
    for ops in steps.into_iter().rev() {
        trace.ops.extend(ops);
    }
    Ok(SynthResult { cost: trace.cost(), trace, per_vertex_costs, strategy, bounds })
}

/// Outcome of checking a synthesis result against its target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub cost: usize,
    pub lower: Option<usize>,
    pub rankwidth: Option<usize>,
    pub upper_generic: Ratio,
    pub upper_rankwidth: Option<Ratio>,
    pub within_generic: bool,
    pub within_rankwidth: Option<bool>,
}

/// Replays the trace, and for connected targets with at most 13 vertices checks
/// the cost against `n + rw - 2`.
pub fn certify(g: &Graph, res: &SynthResult) -> Result<Certificate> {
    if replay(&res.trace)? != *g {
        return Err(Error::ReplayMismatch);
    }
    let cost = res.trace.cost();
    let n = g.n();
    let (lower, rankwidth) = if (2..=rankwidth::EXACT_GUARD).contains(&n) && g.is_connected() {
        let r = rankwidth::exact_rankwidth(g)?.0;
        (Some(bounds::lower_bound(n, r)), Some(r))
    } else {
        (None, res.bounds.rankwidth.filter(|_| res.bounds.rankwidth_exact))
    };
    if let Some(bound) = lower {
        if cost < bound {
            return Err(Error::LowerBoundViolation { cost, bound });
        }
    }
    let upper_generic = bounds::generic_upper::<Ratio>(n);
    let upper_rankwidth = rankwidth.and_then(|r| bounds::rankwidth_upper::<Ratio>(n, r));
    Ok(Certificate {
        cost,
        lower,
        rankwidth,
        within_generic: Ratio::from_integer(cost as i64) <= upper_generic,
        within_rankwidth: upper_rankwidth.map(|u| Ratio::from_integer(cost as i64) <= u),
        upper_generic,
        upper_rankwidth,
    })
}
