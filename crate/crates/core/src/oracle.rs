//! Exact EC-complexity of every labeled graph on a few vertices.
//!
//! Breadth-first search from the empty graph where local complementations
//! are free moves and the three edge complementations cost one each. Graphs
//! are packed into the bits of their upper triangle.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default largest vertex count for [`exact_ec_all`].
pub const ORACLE_GUARD: usize = 6;
/// Hard ceiling for the packed encoding and table size.
pub const ORACLE_MAX: usize = 7;

const UNSEEN: u8 = u8::MAX;

type Rows = [u8; 8];

/// Upper-triangle bit index of each pair `(a, b)`, `a < b`, in row-major order.
fn pair_index(n: usize) -> Vec<Vec<usize>> {
    let mut idx = vec![vec![usize::MAX; n]; n];
    let mut k = 0;
    for a in 0..n {
        for b in a + 1..n {
            idx[a][b] = k;
            idx[b][a] = k;
            k += 1;
        }
    }
    idx
}

#[derive(Clone, Debug)]
struct Codec {
    n: usize,
    idx: Vec<Vec<usize>>,
}

impl Codec {
    fn new(n: usize) -> Codec {
        Codec { n, idx: pair_index(n) }
    }

    fn encode(&self, rows: &Rows) -> u32 {
        let mut code = 0;
        for a in 0..self.n {
            let mut bits = rows[a] & !((2u16 << a) - 1) as u8;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                code |= 1 << self.idx[a][b];
            }
        }
        code
    }

    fn decode(&self, code: u32) -> Rows {
        let mut rows = [0u8; 8];
        for a in 0..self.n {
            for b in a + 1..self.n {
                if code >> self.idx[a][b] & 1 == 1 {
                    rows[a] |= 1 << b;
                    rows[b] |= 1 << a;
                }
            }
        }
        rows
    }
}

fn toggle(rows: &mut Rows, a: usize, b: usize) {
    rows[a] ^= 1 << b;
    rows[b] ^= 1 << a;
}

fn lc(rows: &Rows, v: usize) -> Rows {
    let mut r = *rows;
    let nb = rows[v];
    let mut bits = nb;
    while bits != 0 {
        let u = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        r[u] ^= nb & !(1 << u);
    }
    r
}

fn ec2(rows: &Rows, v: usize, w: usize) -> Rows {
    let mut r = *rows;
    let mut bits = rows[w] & !(1 << v);
    while bits != 0 {
        let u = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        toggle(&mut r, v, u);
    }
    r
}

/// Toggles each pair `{x, y}` with `x ∈ N(v)`, `y ∈ N(w)`, `x ≠ y`, except pairs
/// lying inside `N(v) ∩ N(w)`, each pair once; `v` and `w` must be non-adjacent.
fn ec3(rows: &Rows, n: usize, v: usize, w: usize) -> Rows {
    let (nv, nw) = (rows[v], rows[w]);
    let both = nv & nw;
    let mut r = *rows;
    for x in 0..n {
        for y in x + 1..n {
            let (bx, by) = (1u8 << x, 1u8 << y);
            let cross = (nv & bx != 0 && nw & by != 0) || (nv & by != 0 && nw & bx != 0);
            if cross && !(both & bx != 0 && both & by != 0) {
                toggle(&mut r, x, y);
            }
        }
    }
    r
}

/// Cost-one neighbors of `rows`: EC1 and EC2 over ordered pairs, EC3 over non-adjacent pairs.
fn cost_one_moves(rows: &Rows, n: usize, mut visit: impl FnMut(Rows)) {
    for v in 0..n {
        for w in 0..n {
            if v == w {
                continue;
            }
            if v < w {
                let mut r = *rows;
                toggle(&mut r, v, w);
                visit(r);
                if rows[v] >> w & 1 == 0 {
                    visit(ec3(rows, n, v, w));
                }
            }
            visit(ec2(rows, v, w));
        }
    }
}

/// Minimal cost-one counts for every labeled graph on `n` vertices.
#[derive(Clone, Debug)]
pub struct EcTable {
    n: usize,
    dist: Vec<u8>,
    codec: Codec,
}

impl EcTable {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Distance of the graph with upper-triangle code `code`.
    pub fn by_code(&self, code: u32) -> u8 {
        self.dist[code as usize]
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn encode(&self, g: &Graph) -> Result<u32> {
        if g.n() != self.n {
            return Err(Error::Precondition(format!("table is for {} vertices, graph has {}", self.n, g.n())));
        }
        let mut rows = [0u8; 8];
        for (a, b) in g.edges() {
            toggle(&mut rows, a, b);
        }
        Ok(self.codec.encode(&rows))
    }

    pub fn decode(&self, code: u32) -> Graph {
        let rows = self.codec.decode(code);
        let mut g = Graph::empty(self.n);
        for a in 0..self.n {
            for b in a + 1..self.n {
                if rows[a] >> b & 1 == 1 {
                    g.set_edge(a, b, true);
                }
            }
        }
        g
    }

    pub fn get(&self, g: &Graph) -> Result<usize> {
        Ok(self.by_code(self.encode(g)?) as usize)
    }

    /// The largest distance, i.e. the worst case over all graphs.
    pub fn max(&self) -> usize {
        self.dist.iter().copied().max().unwrap_or(0) as usize
    }

    /// `histogram()[d]` counts the labeled graphs at distance `d`.
    pub fn histogram(&self) -> Vec<usize> {
        let mut h = vec![0; self.max() + 1];
        for &d in &self.dist {
            h[d as usize] += 1;
        }
        h
    }

    pub fn distances(&self) -> &[u8] {
        &self.dist
    }
}

/// Breadth-first search over all graphs on `n ≤ 6` vertices.
pub fn exact_ec_all(n: usize) -> Result<EcTable> {
    exact_ec_all_guarded(n, ORACLE_GUARD)
}

pub fn exact_ec_all_guarded(n: usize, max_n: usize) -> Result<EcTable> {
    let limit = max_n.min(ORACLE_MAX);
    if n > limit {
        return Err(Error::GuardExceeded { what: "exact EC oracle", n, max: limit });
    }
    let codec = Codec::new(n);
    let size = 1usize << (n * n.saturating_sub(1) / 2);
    let mut dist = vec![UNSEEN; size];
    let mut frontier = vec![0u32];
    dist[0] = 0;
    let mut level = 0u8;
    loop {
        // free moves: close the current level under local complementation
        let mut i = 0;
        while i < frontier.len() {
            let rows = codec.decode(frontier[i]);
            for v in 0..n {
                let c = codec.encode(&lc(&rows, v));
                if dist[c as usize] == UNSEEN {
                    dist[c as usize] = level;
                    frontier.push(c);
                }
            }
            i += 1;
        }
        let mut next = Vec::new();
        for &code in &frontier {
            let rows = codec.decode(code);
            cost_one_moves(&rows, n, |r| {
                let c = codec.encode(&r);
                if dist[c as usize] == UNSEEN {
                    dist[c as usize] = level + 1;
                    next.push(c);
                }
            });
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
        level += 1;
    }
    debug_assert!(dist.iter().all(|&d| d != UNSEEN), "every graph is reachable");
    Ok(EcTable { n, dist, codec })
}

fn cached(n: usize) -> Result<&'static EcTable> {
    static TABLES: [OnceLock<EcTable>; ORACLE_GUARD + 1] = [const { OnceLock::new() }; ORACLE_GUARD + 1];
    if n > ORACLE_GUARD {
        return Err(Error::GuardExceeded { what: "exact EC oracle", n, max: ORACLE_GUARD });
    }
    if let Some(t) = TABLES[n].get() {
        return Ok(t);
    }
    let t = exact_ec_all(n)?;
    Ok(TABLES[n].get_or_init(|| t))
}

/// Exact EC-complexity without ancillas, from a table built once per size.
pub fn exact_ec(g: &Graph) -> Result<usize> {
    cached(g.n())?.get(g)
}

/// Per-graph minimum when one extra vertex may be used and deleted at the end.
#[derive(Clone, Debug)]
pub struct AncillaTable {
    pub n: usize,
    /// Indexed by the same upper-triangle code as [`EcTable`].
    pub dist: Vec<u8>,
}

impl AncillaTable {
    pub fn max(&self) -> usize {
        self.dist.iter().copied().max().unwrap_or(0) as usize
    }
}

/// Builds the `n + 1` vertex table and minimizes over every way the extra
/// vertex can attach; the extra vertex is deleted for free at the end.
pub fn exact_ec_with_ancilla(n: usize) -> Result<AncillaTable> {
    let big = exact_ec_all_guarded(n + 1, ORACLE_GUARD)?;
    let small = Codec::new(n);
    let size = 1usize << (n * n.saturating_sub(1) / 2);
    let mut dist = vec![UNSEEN; size];
    for (code, d) in dist.iter_mut().enumerate() {
        let mut rows = small.decode(code as u32);
        for attach in 0..1u16 << n {
            for (v, row) in rows.iter_mut().enumerate().take(n) {
                *row = (*row & !(1 << n)) | (((attach >> v) & 1) as u8) << n;
            }
            rows[n] = attach as u8;
            *d = (*d).min(big.dist[big.codec.encode(&rows) as usize]);
        }
    }
    Ok(AncillaTable { n, dist })
}
