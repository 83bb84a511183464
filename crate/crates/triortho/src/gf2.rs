//! Dense linear algebra over the binary field.
//!
//! Vectors and matrices pack bits into `u64` words so that XOR, AND, and
//! popcount run word-parallel. All operations leave their inputs unmodified;
//! values are safe to share read-only across threads. Gaussian elimination
//! uses deterministic leftmost-pivot selection, so pivot sets (and everything
//! derived from them, such as ordered-statistics column choices) are
//! reproducible.

use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular (rank {rank} < {dim})")]
    Singular { rank: usize, dim: usize },
}

/// A bit vector of fixed length, packed LSB-first into `u64` words.
///
/// Padding bits beyond `len` are kept at zero so that equality, hashing, and
/// popcounts can operate on whole words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(64)
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self {
            len,
            words: vec![u64::MAX; words_for(len)],
        };
        v.mask_tail();
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Builds a vector from the 0/1 bytes of an ASCII string like "01101".
    pub fn from_bit_str(s: &str) -> Option<Self> {
        let mut v = Self::zeros(s.len());
        for (i, c) in s.bytes().enumerate() {
            match c {
                b'0' => {}
                b'1' => v.set(i, true),
                _ => return None,
            }
        }
        Some(v)
    }

    fn mask_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i & 63);
        if value {
            self.words[i >> 6] |= mask;
        } else {
            self.words[i >> 6] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i >> 6] ^= 1u64 << (i & 63);
    }

    /// Hamming weight.
    #[inline]
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut v = self.clone();
        v.xor_assign(other);
        v
    }

    /// Inner product over GF(2): parity of the AND overlap.
    #[inline]
    pub fn dot(&self, other: &BitVector) -> bool {
        debug_assert_eq!(self.len, other.len);
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() & 1 == 1
    }

    /// Integer support overlap |supp(self) ∩ supp(other)|.
    #[inline]
    pub fn overlap(&self, other: &BitVector) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Integer overlap of three supports.
    #[inline]
    pub fn overlap3(&self, b: &BitVector, c: &BitVector) -> usize {
        debug_assert_eq!(self.len, b.len);
        debug_assert_eq!(self.len, c.len);
        self.words
            .iter()
            .zip(&b.words)
            .zip(&c.words)
            .map(|((x, y), z)| (x & y & z).count_ones() as usize)
            .sum()
    }

    /// Indices of the set bits, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.iter_ones().collect()
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let bit = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * 64 + bit)
                }
            })
        })
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        Ok(())
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A dense GF(2) matrix stored row-major as packed [`BitVector`]s.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BitVector>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.data[i].set(i, true);
        }
        m
    }

    /// Builds a matrix from rows; all rows must share one length.
    pub fn from_rows(rows: Vec<BitVector>) -> Self {
        let cols = rows.first().map_or(0, BitVector::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self {
            rows: rows.len(),
            cols,
            data: rows,
        }
    }

    pub fn from_bool_rows(rows: &[&[bool]]) -> Self {
        Self::from_rows(rows.iter().map(|r| BitVector::from_bools(r)).collect())
    }

    /// Parses rows of '0'/'1' characters.
    pub fn from_bit_strs(rows: &[&str]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| BitVector::from_bit_str(r).expect("row must be 0/1"))
                .collect(),
        )
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
    pub fn row(&self, i: usize) -> &BitVector {
        &self.data[i]
    }

    pub fn row_slice(&self) -> &[BitVector] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value);
    }

    pub fn column(&self, c: usize) -> BitVector {
        let mut v = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            if self.data[r].get(c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.data[r].iter_ones() {
                t.data[c].set(r, true);
            }
        }
        t
    }

    /// Stacks `top` above `bottom`.
    pub fn stack(top: &BitMatrix, bottom: &BitMatrix) -> BitMatrix {
        assert_eq!(top.cols, bottom.cols, "column counts differ");
        let mut data = top.data.clone();
        data.extend(bottom.data.iter().cloned());
        BitMatrix {
            rows: top.rows + bottom.rows,
            cols: top.cols,
            data,
        }
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                if self.data[r].get(c) {
                    m.data[r].set(j, true);
                }
            }
        }
        m
    }

    /// Total number of ones (Tanner-graph edge count when viewed as a PCM).
    pub fn count_ones(&self) -> usize {
        self.data.iter().map(BitVector::weight).sum()
    }

    /// Row-space dimension over GF(2).
    pub fn rank(&self) -> usize {
        let mut work = self.data.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == work.len() {
                break;
            }
            let Some(pivot) = (rank..work.len()).find(|&r| work[r].get(col)) else {
                continue;
            };
            work.swap(rank, pivot);
            let pivot_row = work[rank].clone();
            for (r, row) in work.iter_mut().enumerate() {
                if r != rank && row.get(col) {
                    row.xor_assign(&pivot_row);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Matrix-vector product over GF(2).
    pub fn matvec(&self, v: &BitVector) -> Result<BitVector, Gf2Error> {
        if v.len() != self.cols {
            return Err(Gf2Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        let mut out = BitVector::zeros(self.rows);
        for (r, row) in self.data.iter().enumerate() {
            if row.dot(v) {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    /// Inverse of a square full-rank matrix.
    pub fn invert(&self) -> Result<BitMatrix, Gf2Error> {
        if self.rows != self.cols {
            return Err(Gf2Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut work = self.data.clone();
        let mut inv = BitMatrix::identity(n).data;
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| work[r].get(col)) else {
                return Err(Gf2Error::Singular {
                    rank: col,
                    dim: n,
                });
            };
            work.swap(col, pivot);
            inv.swap(col, pivot);
            let pivot_row = work[col].clone();
            let pivot_inv = inv[col].clone();
            for r in 0..n {
                if r != col && work[r].get(col) {
                    work[r].xor_assign(&pivot_row);
                    inv[r].xor_assign(&pivot_inv);
                }
            }
        }
        Ok(BitMatrix {
            rows: n,
            cols: n,
            data: inv,
        })
    }

    /// Greedy left-to-right selection of the first `rank` linearly independent
    /// columns.
    ///
    /// Returns the chosen column indices together with the invertible
    /// `r x r` submatrix taken on those columns and the pivot rows that
    /// witnessed their independence.
    pub fn first_independent_columns(&self) -> (Vec<usize>, BitMatrix) {
        // Eliminate column by column on a transposed working copy: each
        // accepted column is reduced against previous pivots; a nonzero
        // remainder means it enlarges the span.
        let mut indices = Vec::new();
        let mut pivot_rows: Vec<usize> = Vec::new();
        // Reduced versions of the accepted columns.
        let mut reduced: Vec<BitVector> = Vec::new();
        for c in 0..self.cols {
            let mut col = self.column(c);
            for (p, red) in pivot_rows.iter().zip(&reduced) {
                if col.get(*p) {
                    col.xor_assign(red);
                }
            }
            let first_one = col.iter_ones().next();
            if let Some(p) = first_one {
                // Normalize earlier reduced columns so each pivot row stays
                // private to one column.
                for red in reduced.iter_mut() {
                    if red.get(p) {
                        red.xor_assign(&col);
                    }
                }
                pivot_rows.push(p);
                reduced.push(col);
                indices.push(c);
                if indices.len() == self.rows {
                    break;
                }
            }
        }
        let mut row_order = pivot_rows.clone();
        row_order.sort_unstable();
        let sub = self.select_rows(&row_order).select_columns(&indices);
        (indices, sub)
    }

    /// Keeps the listed rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> BitMatrix {
        BitMatrix {
            rows: rows.len(),
            cols: self.cols,
            data: rows.iter().map(|&r| self.data[r].clone()).collect(),
        }
    }

    /// A basis (as matrix rows) of the right null space {v : Mv = 0}.
    ///
    /// The returned matrix has `cols - rank` rows.
    pub fn nullspace_basis(&self) -> BitMatrix {
        // Reduced row echelon form, tracking pivot columns.
        let mut work = self.data.clone();
        let mut pivot_cols = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == work.len() {
                break;
            }
            let Some(pivot) = (rank..work.len()).find(|&r| work[r].get(col)) else {
                continue;
            };
            work.swap(rank, pivot);
            let pivot_row = work[rank].clone();
            for (r, row) in work.iter_mut().enumerate() {
                if r != rank && row.get(col) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivot_cols.push(col);
            rank += 1;
        }
        let is_pivot = {
            let mut v = vec![false; self.cols];
            for &c in &pivot_cols {
                v[c] = true;
            }
            v
        };
        let mut basis = Vec::with_capacity(self.cols - rank);
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = BitVector::zeros(self.cols);
            v.set(free, true);
            for (r, &pc) in pivot_cols.iter().enumerate() {
                if work[r].get(free) {
                    v.set(pc, true);
                }
            }
            basis.push(v);
        }
        BitMatrix {
            rows: basis.len(),
            cols: self.cols,
            data: basis,
        }
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for row in &self.data {
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}
