//! Dense linear algebra over GF(2) on bit-packed rows.

use std::fmt;

const WORD: usize = 64;

#[inline]
fn words_for(cols: usize) -> usize {
    cols.div_ceil(WORD)
}

/// Row-major bit-packed matrix over the two-element field.
///
/// Bits past `cols` in the last word of each row are always zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix { rows, cols, stride, data: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of 0/1 entries. All rows must have equal length.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged row {i}");
            for (j, &b) in r.iter().enumerate() {
                if b != 0 {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        (self.data[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        let w = &mut self.data[r * self.stride + c / WORD];
        let bit = 1u64 << (c % WORD);
        if value {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    #[inline]
    pub fn toggle(&mut self, r: usize, c: usize) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of range");
        self.data[r * self.stride + c / WORD] ^= 1u64 << (c % WORD);
    }

    /// Packed words of row `r`.
    #[inline]
    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row_bits(&self, r: usize) -> Vec<bool> {
        (0..self.cols).map(|c| self.get(r, c)).collect()
    }

    /// row[dst] ^= row[src]
    pub fn xor_row(&mut self, dst: usize, src: usize) {
        if dst == src {
            self.row_mut(dst).fill(0);
            return;
        }
        let s = self.stride;
        let (a, b) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&mut lo[dst * s..dst * s + s], &hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&mut hi[..s], &lo[src * s..src * s + s])
        };
        for (x, y) in a.iter_mut().zip(b) {
            *x ^= *y;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.stride {
            self.data.swap(a * self.stride + k, b * self.stride + k);
        }
    }

    pub fn row_is_zero(&self, r: usize) -> bool {
        self.row(r).iter().all(|&w| w == 0)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    let (dst, src) = (r * out.stride, k * other.stride);
                    for w in 0..out.stride {
                        out.data[dst + w] ^= other.data[src + w];
                    }
                }
            }
        }
        out
    }

    /// m·x for a column vector x.
    pub fn mul_vec(&self, x: &[bool]) -> Vec<bool> {
        assert_eq!(x.len(), self.cols, "dimension mismatch");
        (0..self.rows).map(|r| (0..self.cols).filter(|&c| x[c] && self.get(r, c)).count() % 2 == 1).collect()
    }

    /// Submatrix on the given row and column index lists, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                if self.get(r, c) {
                    out.set(i, j, true);
                }
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }

    /// Copies the given rows, keeping only the columns set in `mask`
    /// (a packed column mask with this matrix's row stride).
    pub(crate) fn masked_rows(&self, rows: &[usize], mask: &[u64]) -> BitMatrix {
        debug_assert_eq!(mask.len(), self.stride);
        let mut out = BitMatrix::zeros(rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            for ((o, s), m) in out.row_mut(i).iter_mut().zip(self.row(r)).zip(mask) {
                *o = s & m;
            }
        }
        out
    }
}

/// Rank of a set of rows packed into single words (at most 64 columns).
pub fn rank_u64(rows: &mut [u64]) -> usize {
    let mut rank = 0;
    for i in 0..rows.len() {
        let mut v = rows[i];
        for &b in &rows[..rank] {
            v = v.min(v ^ b);
        }
        if v != 0 {
            // keep the basis sorted by leading bit, descending, so `min` reduction is exact
            let mut j = rank;
            while j > 0 && rows[j - 1] < v {
                rows[j] = rows[j - 1];
                j -= 1;
            }
            rows[j] = v;
            rank += 1;
        }
    }
    rank
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let s: String = (0..self.cols).map(|c| if self.get(r, c) { '1' } else { '0' }).collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

/// Row rank over GF(2).
pub fn rank(m: &BitMatrix) -> usize {
    let mut work = m.clone();
    let mut rank = 0;
    for c in 0..work.cols {
        let Some(p) = (rank..work.rows).find(|&r| work.get(r, c)) else {
            continue;
        };
        work.swap_rows(rank, p);
        for r in rank + 1..work.rows {
            if work.get(r, c) {
                work.xor_row(r, rank);
            }
        }
        rank += 1;
        if rank == work.rows {
            break;
        }
    }
    rank
}

/// A row expressible as the sum of other rows: row `row` equals the XOR of rows in `combination`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowDependence {
    pub row: usize,
    pub combination: Vec<usize>,
}

/// Scans rows top to bottom and reports the first row lying in the span of
/// the rows above it, or `None` when all rows are independent.
pub fn find_dependent_row(m: &BitMatrix) -> Option<RowDependence> {
    let rstride = words_for(m.rows);
    // basis entries: (pivot column, reduced row, combination of original rows)
    let mut basis: Vec<(usize, Vec<u64>, Vec<u64>)> = Vec::new();
    for i in 0..m.rows {
        let mut vec = m.row(i).to_vec();
        let mut combo = vec![0u64; rstride];
        for (pivot, brow, bcombo) in &basis {
            if (vec[pivot / WORD] >> (pivot % WORD)) & 1 == 1 {
                for (x, y) in vec.iter_mut().zip(brow) {
                    *x ^= *y;
                }
                for (x, y) in combo.iter_mut().zip(bcombo) {
                    *x ^= *y;
                }
            }
        }
        match first_set_bit(&vec) {
            None => {
                let combination = (0..m.rows).filter(|&r| (combo[r / WORD] >> (r % WORD)) & 1 == 1).collect();
                return Some(RowDependence { row: i, combination });
            }
            Some(pivot) => {
                combo[i / WORD] ^= 1 << (i % WORD);
                basis.push((pivot, vec, combo));
            }
        }
    }
    None
}

fn first_set_bit(words: &[u64]) -> Option<usize> {
    words.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, &w)| i * WORD + w.trailing_zeros() as usize)
}

/// Solves m·x = b. Free variables are set to zero; returns `None` when the system is inconsistent.
pub fn solve(m: &BitMatrix, b: &[bool]) -> Option<Vec<bool>> {
    assert_eq!(b.len(), m.rows, "right-hand side length must equal row count");
    let n = m.cols;
    // augmented [m | b]
    let mut aug = BitMatrix::zeros(m.rows, n + 1);
    for r in 0..m.rows {
        for c in 0..n {
            if m.get(r, c) {
                aug.set(r, c, true);
            }
        }
        if b[r] {
            aug.set(r, n, true);
        }
    }
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..n {
        let Some(p) = (rank..aug.rows).find(|&r| aug.get(r, c)) else {
            continue;
        };
        aug.swap_rows(rank, p);
        for r in 0..aug.rows {
            if r != rank && aug.get(r, c) {
                aug.xor_row(r, rank);
            }
        }
        pivots.push(c);
        rank += 1;
    }
    if (rank..aug.rows).any(|r| aug.get(r, n)) {
        return None;
    }
    let mut x = vec![false; n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug.get(r, n);
    }
    Some(x)
}
