//! Two-qubit Clifford operators up to Pauli, as 4×4 symplectic matrices, and
//! their normal forms with at most one CZ and at most one SWAP.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use super::circuit::{circuit_action, Circuit, Gate};
use crate::error::{Error, Result};
use crate::f2linalg::BitMatrix;

/// A 4×4 matrix over GF(2) acting on row vectors `(x_a, x_b, z_a, z_b)`.
/// Row `i` is stored in the low four bits of `rows[i]`, column `j` at bit `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Symplectic2Q {
    rows: [u8; 4],
}

impl Symplectic2Q {
    pub fn identity() -> Self {
        Symplectic2Q { rows: [1, 2, 4, 8] }
    }

    /// Packs the 16 entries row-major into the low bits, entry `(i, j)` at bit `4i + j`.
    pub fn from_u16(bits: u16) -> Self {
        Symplectic2Q { rows: [0, 1, 2, 3].map(|i| ((bits >> (4 * i)) & 0xF) as u8) }
    }

    pub fn to_u16(self) -> u16 {
        self.rows.iter().enumerate().map(|(i, &r)| (r as u16) << (4 * i)).sum()
    }

    pub fn from_matrix(m: &BitMatrix) -> Result<Self> {
        if m.rows() != 4 || m.cols() != 4 {
            return Err(Error::Precondition("two-qubit action must be 4x4".into()));
        }
        let mut rows = [0u8; 4];
        for (i, r) in rows.iter_mut().enumerate() {
            for j in 0..4 {
                *r |= (m.get(i, j) as u8) << j;
            }
        }
        Ok(Symplectic2Q { rows })
    }

    pub fn to_matrix(self) -> BitMatrix {
        let mut m = BitMatrix::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                m.set(i, j, self.get(i, j));
            }
        }
        m
    }

    pub fn get(self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub(crate) fn apply_row(self, v: [bool; 4]) -> [bool; 4] {
        let mut acc = 0u8;
        for (i, &bit) in v.iter().enumerate() {
            if bit {
                acc ^= self.rows[i];
            }
        }
        [0, 1, 2, 3].map(|j| acc >> j & 1 == 1)
    }

    /// `M Λ Mᵀ = Λ` with `Λ` swapping the x and z halves.
    pub fn is_symplectic(self) -> bool {
        let form = |u: u8, v: u8| ((u & 3) & (v >> 2)).count_ones() + ((u >> 2) & (v & 3)).count_ones();
        (0..4).all(|i| (0..4).all(|j| form(self.rows[i], self.rows[j]) % 2 == ((i ^ j) == 2) as u32))
    }

    /// Action of the two-qubit circuit `gates` on qubits 0 and 1.
    pub fn of_gates(gates: &[Gate]) -> Result<Self> {
        Symplectic2Q::from_matrix(&circuit_action(&Circuit { n: 2, gates: gates.to_vec() })?)
    }
}

impl std::ops::Mul for Symplectic2Q {
    type Output = Symplectic2Q;

    /// Matrix product; `a * b` acts as `a` followed by `b`.
    fn mul(self, other: Self) -> Self {
        let mut rows = [0u8; 4];
        for (i, r) in rows.iter_mut().enumerate() {
            let v = [0, 1, 2, 3].map(|j| self.get(i, j));
            let out = other.apply_row(v);
            *r = out.iter().enumerate().map(|(j, &b)| (b as u8) << j).sum();
        }
        Symplectic2Q { rows }
    }
}

impl fmt::Display for Symplectic2Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..4 {
            for j in 0..4 {
                f.write_str(if self.get(i, j) { "1" } else { "0" })?;
            }
        }
        Ok(())
    }
}

impl FromStr for Symplectic2Q {
    type Err = Error;

    /// Sixteen `0`/`1` characters, row-major; whitespace is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let bits: Vec<bool> = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Precondition(format!("unexpected `{other}` in matrix"))),
            })
            .collect::<Result<_>>()?;
        if bits.len() != 16 {
            return Err(Error::Precondition(format!("expected 16 matrix bits, found {}", bits.len())));
        }
        let packed = bits.iter().enumerate().map(|(k, &b)| (b as u16) << k).sum();
        Ok(Symplectic2Q::from_u16(packed))
    }
}

/// The six single-qubit Clifford actions, as gate sequences in time order.
const SINGLE: [&[char]; 6] = [&[], &['H'], &['S', 'H'], &['S'], &['H', 'S', 'H'], &['H', 'S']];
/// Those among [`SINGLE`] that may precede the CZ in a normal form.
const BEFORE_CZ: [usize; 3] = [0, 1, 2];

fn single(q: usize, k: usize) -> impl Iterator<Item = Gate> {
    SINGLE[k].iter().map(move |&c| if c == 'H' { Gate::H(q) } else { Gate::S(q) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CliffordClass {
    /// `A ⊗ B`
    Local,
    /// `(A ⊗ B) CZ (C ⊗ D)`
    Cz,
    /// `(A ⊗ B) CZ (C ⊗ D) SWAP`
    SwapCz,
    /// `(A ⊗ B) SWAP`
    Swap,
}

impl CliffordClass {
    pub fn label(self) -> char {
        match self {
            CliffordClass::Local => 'a',
            CliffordClass::Cz => 'b',
            CliffordClass::SwapCz => 'c',
            CliffordClass::Swap => 'd',
        }
    }
}

/// A normal form: optional SWAP, optional `C ⊗ D` then CZ, then `A ⊗ B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub class: CliffordClass,
    /// Indices into the six single-qubit actions, applied before the CZ.
    pub before: Option<(usize, usize)>,
    pub after: (usize, usize),
}

impl NormalForm {
    pub fn gates(&self, a: usize, b: usize) -> Vec<Gate> {
        let mut g = Vec::new();
        if matches!(self.class, CliffordClass::Swap | CliffordClass::SwapCz) {
            g.push(Gate::Swap(a, b));
        }
        if let Some((c, d)) = self.before {
            g.extend(single(a, c).chain(single(b, d)));
            g.push(Gate::Cz(a, b));
        }
        g.extend(single(a, self.after.0).chain(single(b, self.after.1)));
        g
    }

    fn all() -> impl Iterator<Item = NormalForm> {
        let locals = || (0..6).flat_map(|a| (0..6).map(move |b| (a, b)));
        let pre = || BEFORE_CZ.into_iter().flat_map(|c| BEFORE_CZ.into_iter().map(move |d| (c, d)));
        let plain = |class| locals().map(move |after| NormalForm { class, before: None, after });
        let with_cz = move |class| {
            pre().flat_map(move |before| locals().map(move |after| NormalForm { class, before: Some(before), after }))
        };
        plain(CliffordClass::Local)
            .chain(with_cz(CliffordClass::Cz))
            .chain(with_cz(CliffordClass::SwapCz))
            .chain(plain(CliffordClass::Swap))
    }
}

fn table() -> &'static HashMap<Symplectic2Q, NormalForm> {
    static TABLE: OnceLock<HashMap<Symplectic2Q, NormalForm>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = HashMap::new();
        for form in NormalForm::all() {
            let m = Symplectic2Q::of_gates(&form.gates(0, 1)).expect("normal forms are unitary");
            // keep the first, cheapest form for each matrix
            t.entry(m).or_insert(form);
        }
        t
    })
}

/// Number of normal forms generated per class, before any deduplication.
pub fn normal_form_counts() -> [usize; 4] {
    let mut c = [0; 4];
    for f in NormalForm::all() {
        c[f.class as usize] += 1;
    }
    c
}

pub fn classify(m: &Symplectic2Q) -> Result<NormalForm> {
    if !m.is_symplectic() {
        return Err(Error::NonSymplectic);
    }
    table().get(m).copied().ok_or_else(|| Error::Precondition(format!("no normal form found for {m}")))
}

/// Circuit on qubits 0 and 1 whose action equals `m`.
pub fn decompose_two_qubit(m: &Symplectic2Q) -> Result<Circuit> {
    Ok(Circuit { n: 2, gates: decompose_on(m, 0, 1)? })
}

pub(crate) fn decompose_on(m: &Symplectic2Q, a: usize, b: usize) -> Result<Vec<Gate>> {
    Ok(classify(m)?.gates(a, b))
}

/// Result of sweeping all 2¹⁶ 4×4 matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCounts {
    /// Symplectic matrices per class (a), (b), (c), (d).
    pub per_class: [usize; 4],
    pub total: usize,
    /// Symplectic matrices with no normal form; zero when the forms are complete.
    pub unclassified: usize,
}

pub fn enumerate_two_qubit_classes() -> ClassCounts {
    let mut per_class = [0; 4];
    let mut total = 0;
    let mut unclassified = 0;
    for bits in 0..=u16::MAX {
        let m = Symplectic2Q::from_u16(bits);
        if !m.is_symplectic() {
            continue;
        }
        total += 1;
        match table().get(&m) {
            Some(f) => per_class[f.class as usize] += 1,
            None => unclassified += 1,
        }
    }
    ClassCounts { per_class, total, unclassified }
}
