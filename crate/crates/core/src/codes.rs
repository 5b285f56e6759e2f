//! Self-dual additive codes over GF(4) attached to graphs.
//!
//! A GF(4) symbol is stored as an `(x, z)` bit pair: `0 = (0,0)`, `1 = (0,1)`,
//! `ω = (1,0)`, `ω² = (1,1)`, i.e. the Pauli operators I, Z, X, Y.

use std::fmt;

use crate::error::{Error, Result};
use crate::f2linalg::BitMatrix;
use crate::graph::Graph;
use crate::rankwidth::DependentSet;

/// Largest length accepted by the exhaustive codeword sweep.
pub const MIN_DISTANCE_GUARD: usize = 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gf4 {
    Zero,
    One,
    Omega,
    OmegaSq,
}

impl Gf4 {
    pub fn from_bits(x: bool, z: bool) -> Gf4 {
        match (x, z) {
            (false, false) => Gf4::Zero,
            (false, true) => Gf4::One,
            (true, false) => Gf4::Omega,
            (true, true) => Gf4::OmegaSq,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Gf4::Zero => (false, false),
            Gf4::One => (false, true),
            Gf4::Omega => (true, false),
            Gf4::OmegaSq => (true, true),
        }
    }
}

impl fmt::Display for Gf4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gf4::Zero => "0",
            Gf4::One => "1",
            Gf4::Omega => "w",
            Gf4::OmegaSq => "w2",
        })
    }
}

/// An additive code given by `n` generators, each split into x and z bit rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditiveCode {
    x: BitMatrix,
    z: BitMatrix,
}

impl AdditiveCode {
    pub fn new(x: BitMatrix, z: BitMatrix) -> Result<Self> {
        if x.rows() != z.rows() || x.cols() != z.cols() {
            return Err(Error::Precondition("x and z parts must have the same shape".into()));
        }
        Ok(AdditiveCode { x, z })
    }

    /// Parses Pauli strings such as `"XZIY"`, one per generator.
    pub fn from_paulis(rows: &[&str]) -> Result<Self> {
        let n = rows.first().map_or(0, |r| r.len());
        let mut x = BitMatrix::zeros(rows.len(), n);
        let mut z = BitMatrix::zeros(rows.len(), n);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::Precondition(format!("generator {i} has the wrong length")));
            }
            for (j, c) in r.chars().enumerate() {
                let (xb, zb) = match c {
                    'I' => (false, false),
                    'X' => (true, false),
                    'Y' => (true, true),
                    'Z' => (false, true),
                    other => return Err(Error::Precondition(format!("unknown Pauli `{other}`"))),
                };
                x.set(i, j, xb);
                z.set(i, j, zb);
            }
        }
        AdditiveCode::new(x, z)
    }

    pub fn len(&self) -> usize {
        self.x.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn generator_count(&self) -> usize {
        self.x.rows()
    }

    pub fn x_part(&self) -> &BitMatrix {
        &self.x
    }

    pub fn z_part(&self) -> &BitMatrix {
        &self.z
    }

    pub fn symbol(&self, row: usize, col: usize) -> Gf4 {
        Gf4::from_bits(self.x.get(row, col), self.z.get(row, col))
    }

    pub fn gf4_rows(&self) -> Vec<Vec<Gf4>> {
        (0..self.generator_count()).map(|i| (0..self.len()).map(|j| self.symbol(i, j)).collect()).collect()
    }

    /// Trace inner product of two generators; zero means they commute as Paulis.
    pub fn trace_product(&self, i: usize, j: usize) -> bool {
        let dot = |a: &BitMatrix, b: &BitMatrix| {
            a.row(i).iter().zip(b.row(j)).map(|(p, q)| (p & q).count_ones()).sum::<u32>() & 1 == 1
        };
        dot(&self.x, &self.z) ^ dot(&self.z, &self.x)
    }

    /// All generator pairs orthogonal and the generators independent over GF(2).
    pub fn is_self_dual(&self) -> bool {
        let k = self.generator_count();
        if k != self.len() {
            return false;
        }
        for i in 0..k {
            for j in i + 1..k {
                if self.trace_product(i, j) {
                    return false;
                }
            }
        }
        let mut stacked = BitMatrix::zeros(k, 2 * k);
        for i in 0..k {
            for j in 0..k {
                stacked.set(i, j, self.x.get(i, j));
                stacked.set(i, k + j, self.z.get(i, j));
            }
        }
        stacked.rank() == k
    }
}

/// Code with generator matrix `ωI + A`.
pub fn code_from_graph(g: &Graph) -> AdditiveCode {
    AdditiveCode { x: BitMatrix::identity(g.n()), z: g.adjacency().clone() }
}

/// A codeword as the GF(2) combination of generators that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Codeword {
    /// Bit `i` set when generator `i` is in the combination.
    pub generators: u64,
    pub x: u64,
    pub z: u64,
}

impl Codeword {
    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    pub fn support(&self) -> Vec<usize> {
        (0..64).filter(|&i| (self.x | self.z) >> i & 1 == 1).collect()
    }
}

fn packed_rows(m: &BitMatrix) -> Vec<u64> {
    (0..m.rows()).map(|i| m.row(i).first().copied().unwrap_or(0)).collect()
}

/// Every nonzero codeword, in Gray-code order of generator subsets.
pub fn codewords(c: &AdditiveCode) -> Result<impl Iterator<Item = Codeword>> {
    let k = c.generator_count();
    if k > MIN_DISTANCE_GUARD || c.len() > 64 {
        return Err(Error::GuardExceeded { what: "codeword enumeration", n: k, max: MIN_DISTANCE_GUARD });
    }
    let gx = packed_rows(&c.x);
    let gz = packed_rows(&c.z);
    let mut state = Codeword { generators: 0, x: 0, z: 0 };
    Ok((1u64..1 << k).map(move |i| {
        let b = i.trailing_zeros() as usize;
        state.generators ^= 1 << b;
        state.x ^= gx[b];
        state.z ^= gz[b];
        state.clone()
    }))
}

/// First minimum-weight codeword met in Gray-code order.
pub fn min_weight_codeword(c: &AdditiveCode) -> Result<Codeword> {
    if c.generator_count() == 0 {
        return Err(Error::Precondition("code has no generators".into()));
    }
    let mut best: Option<Codeword> = None;
    for w in codewords(c)? {
        if best.as_ref().is_none_or(|b| w.weight() < b.weight()) {
            let done = w.weight() <= 1;
            best = Some(w);
            if done {
                break;
            }
        }
    }
    Ok(best.expect("at least one nonzero codeword"))
}

pub fn min_distance(c: &AdditiveCode) -> Result<usize> {
    Ok(min_weight_codeword(c)?.weight())
}

/// The support of a minimum-weight codeword of the graph's code, certified as dependent.
pub fn dependent_set_from_code(g: &Graph) -> Result<DependentSet> {
    let word = min_weight_codeword(&code_from_graph(g))?;
    DependentSet::from_vertices(g, &word.support())
        .ok_or_else(|| Error::Precondition("codeword support is not dependent".into()))
}

/// Upper bound on the minimum distance of any self-dual additive code of length `n`.
pub fn mind_bound(n: usize) -> usize {
    2 * (n / 6) + if n % 6 == 5 { 3 } else { 2 }
}
