//! Dense bit-packed linear algebra over GF(2).
//!
//! Rows are stored as runs of 64-bit words; bits past the last column are kept
//! at zero so row operations can work a whole word at a time. Matrices with no
//! rows or no columns are ordinary values and behave as the zero map.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

#[inline]
fn tail_mask(bits: usize) -> u64 {
    match bits % WORD_BITS {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

/// A binary vector of fixed length.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
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

    /// Builds a vector from its support.
    pub fn from_support(len: usize, support: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in support {
            v.set(i, true);
        }
        v
    }

    pub(crate) fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(len);
        }
        Self { len, words }
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
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        xor_words(&mut self.words, &other.words);
    }

    /// Parity of the bitwise AND, i.e. the GF(2) inner product.
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    /// Indices of the set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        iter_ones(&self.words)
    }

    /// Keeps the listed coordinates, in the given order.
    pub fn select(&self, indices: &[usize]) -> BitVec {
        BitVec::from_support(
            indices.len(),
            indices
                .iter()
                .enumerate()
                .filter(|&(_, &i)| self.get(i))
                .map(|(k, _)| k),
        )
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitVec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse {
                    line: 1,
                    msg: format!("unexpected character {other:?} in bit string"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BitVec::from_bools(&bits))
    }
}

#[inline]
pub(crate) fn xor_words(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

pub(crate) fn iter_ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD_BITS + tz)
            }
        })
    })
}

/// Dense binary matrix, row-major, each row padded to a word boundary.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BinMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BinMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    /// The n×n identity `E_n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[BitVec], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row {i} has wrong length");
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        m
    }

    pub fn from_bools(rows: &[Vec<bool>], cols: usize) -> Self {
        let vecs: Vec<BitVec> = rows.iter().map(|r| BitVec::from_bools(r)).collect();
        Self::from_rows(&vecs, cols)
    }

    /// Parses rows written as `0`/`1` strings, e.g. `["110", "011"]`.
    ///
    /// Panics on malformed input; intended for literals in code and tests.
    pub fn from_strs(rows: &[&str]) -> Self {
        let vecs: Vec<BitVec> = rows
            .iter()
            .map(|r| r.parse().expect("invalid bit string"))
            .collect();
        let cols = vecs.first().map_or(0, BitVec::len);
        Self::from_rows(&vecs, cols)
    }

    /// Builds a matrix from a list of `(row, col)` positions of ones. Duplicates cancel.
    pub fn from_entries(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize)>,
    ) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (r, c) in entries {
            m.toggle(r, c);
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

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    #[inline]
    pub(crate) fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    pub(crate) fn row_words_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn row(&self, i: usize) -> BitVec {
        assert!(i < self.rows, "row {i} out of range {}", self.rows);
        BitVec::from_words(self.cols, self.row_words(i).to_vec())
    }

    pub fn column(&self, j: usize) -> BitVec {
        assert!(j < self.cols, "column {j} out of range {}", self.cols);
        BitVec::from_support(self.rows, (0..self.rows).filter(|&i| self.get(i, j)))
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(
            i < self.rows && j < self.cols,
            "entry ({i},{j}) out of range"
        );
        self.data[i * self.stride + j / WORD_BITS] >> (j % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(
            i < self.rows && j < self.cols,
            "entry ({i},{j}) out of range"
        );
        let idx = i * self.stride + j / WORD_BITS;
        let mask = 1u64 << (j % WORD_BITS);
        if value {
            self.data[idx] |= mask;
        } else {
            self.data[idx] &= !mask;
        }
    }

    #[inline]
    pub fn toggle(&mut self, i: usize, j: usize) {
        assert!(
            i < self.rows && j < self.cols,
            "entry ({i},{j}) out of range"
        );
        self.data[i * self.stride + j / WORD_BITS] ^= 1u64 << (j % WORD_BITS);
    }

    /// Column indices of the ones in row `i`.
    pub fn row_support(&self, i: usize) -> Vec<usize> {
        iter_ones(self.row_words(i)).collect()
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn row_weights(&self) -> Vec<usize> {
        (0..self.rows)
            .map(|i| {
                self.row_words(i)
                    .iter()
                    .map(|w| w.count_ones() as usize)
                    .sum()
            })
            .collect()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.cols];
        for i in 0..self.rows {
            for j in iter_ones(self.row_words(i)) {
                w[j] += 1;
            }
        }
        w
    }

    pub fn transpose(&self) -> BinMatrix {
        let mut t = BinMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in iter_ones(self.row_words(i)) {
                t.set(j, i, true);
            }
        }
        t
    }

    /// GF(2) product `self * other`.
    pub fn multiply(&self, other: &BinMatrix) -> Result<BinMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = BinMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let (lo, hi) = (i * out.stride, (i + 1) * out.stride);
            for k in iter_ones(self.row_words(i)) {
                xor_words(&mut out.data[lo..hi], other.row_words(k));
            }
        }
        Ok(out)
    }

    /// Computes `self * v^T` as a vector of length `rows`.
    pub fn mul_vec(&self, v: &BitVec) -> Result<BitVec> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok(BitVec::from_support(
            self.rows,
            (0..self.rows).filter(|&i| {
                self.row_words(i)
                    .iter()
                    .zip(v.words())
                    .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
                    & 1
                    == 1
            }),
        ))
    }

    /// Kronecker product; block `(i, j)` is `other` when `self[i, j] = 1`.
    pub fn kron(&self, other: &BinMatrix) -> BinMatrix {
        let (br, bc) = other.shape();
        let mut out = BinMatrix::zeros(self.rows * br, self.cols * bc);
        if out.is_empty() {
            return out;
        }
        let other_support: Vec<Vec<usize>> = (0..br).map(|k| other.row_support(k)).collect();
        for i in 0..self.rows {
            for j in iter_ones(self.row_words(i)) {
                for (k, support) in other_support.iter().enumerate() {
                    for &l in support {
                        out.set(i * br + k, j * bc + l, true);
                    }
                }
            }
        }
        out
    }

    /// Writes `block` into this matrix with its top-left corner at `(row, col)`.
    pub fn paste(&mut self, row: usize, col: usize, block: &BinMatrix) {
        assert!(
            row + block.rows <= self.rows && col + block.cols <= self.cols,
            "block does not fit"
        );
        for i in 0..block.rows {
            for j in iter_ones(block.row_words(i)) {
                self.set(row + i, col + j, true);
            }
        }
    }

    /// Keeps the listed columns, in order.
    pub fn select_columns(&self, indices: &[usize]) -> BinMatrix {
        let mut out = BinMatrix::zeros(self.rows, indices.len());
        for i in 0..self.rows {
            for (k, &j) in indices.iter().enumerate() {
                if self.get(i, j) {
                    out.set(i, k, true);
                }
            }
        }
        out
    }

    /// Appends `v` as a column on the right.
    pub fn with_column(&self, v: &BitVec) -> BinMatrix {
        assert_eq!(v.len(), self.rows);
        let mut out = BinMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            let stride = self.stride;
            out.row_words_mut(i)[..stride].copy_from_slice(self.row_words(i));
            if v.get(i) {
                out.set(i, self.cols, true);
            }
        }
        out
    }

    /// Gauss-Jordan elimination to reduced row-echelon form, pivoting only in
    /// columns `< limit`. Returns the pivot columns; pivot row `k` holds pivot `k`.
    fn reduce_in_place(&mut self, limit: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..limit.min(self.cols) {
            if next == self.rows {
                break;
            }
            let (w, mask) = (col / WORD_BITS, 1u64 << (col % WORD_BITS));
            let Some(p) = (next..self.rows).find(|&r| self.data[r * self.stride + w] & mask != 0)
            else {
                continue;
            };
            if p != next {
                for k in 0..self.stride {
                    self.data.swap(p * self.stride + k, next * self.stride + k);
                }
            }
            let pivot_row = self.row_words(next).to_vec();
            for r in 0..self.rows {
                if r != next && self.data[r * self.stride + w] & mask != 0 {
                    xor_words(self.row_words_mut(r), &pivot_row);
                }
            }
            pivots.push(col);
            next += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().reduce_in_place(self.cols).len()
    }

    /// Row-reduced basis of the row space.
    pub fn row_space_basis(&self) -> Ge2Basis {
        let mut m = self.clone();
        let pivots = m.reduce_in_place(m.cols);
        m.data.truncate(pivots.len() * m.stride);
        m.rows = pivots.len();
        Ge2Basis {
            matrix: m,
            pivot_cols: pivots,
        }
    }

    /// Basis of `{x : self * x^T = 0}`.
    pub fn kernel_basis(&self) -> Ge2Basis {
        let mut m = self.clone();
        let pivots = m.reduce_in_place(m.cols);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let vectors: Vec<BitVec> = (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = BitVec::unit(self.cols, f);
                for (k, &p) in pivots.iter().enumerate() {
                    if m.get(k, f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect();
        BinMatrix::from_rows(&vectors, self.cols).row_space_basis()
    }

    /// Basis of the column span, as rows of length `self.rows`.
    pub fn column_space_basis(&self) -> Ge2Basis {
        self.transpose().row_space_basis()
    }

    /// Finds some `x` with `self * x^T = y^T`, if one exists.
    pub fn solve(&self, y: &BitVec) -> Result<Option<BitVec>> {
        if y.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} against {} rows",
                y.len(),
                self.rows
            )));
        }
        let mut aug = self.with_column(y);
        let pivots = aug.reduce_in_place(self.cols);
        let consistent = (pivots.len()..aug.rows).all(|r| !aug.get(r, self.cols));
        if !consistent {
            return Ok(None);
        }
        let mut x = BitVec::zeros(self.cols);
        for (k, &p) in pivots.iter().enumerate() {
            if aug.get(k, self.cols) {
                x.set(p, true);
            }
        }
        Ok(Some(x))
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &BinMatrix) -> Result<BinMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "hstack of {} and {} rows",
                self.rows, other.rows
            )));
        }
        let mut out = BinMatrix::zeros(self.rows, self.cols + other.cols);
        out.paste(0, 0, self);
        out.paste(0, self.cols, other);
        Ok(out)
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &BinMatrix) -> Result<BinMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "vstack of {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut out = BinMatrix::zeros(self.rows + other.rows, self.cols);
        out.data[..self.data.len()].copy_from_slice(&self.data);
        out.data[self.data.len()..].copy_from_slice(&other.data);
        Ok(out)
    }
}

impl fmt::Debug for BinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// A row basis in reduced row-echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ge2Basis {
    matrix: BinMatrix,
    pivot_cols: Vec<usize>,
}

impl Ge2Basis {
    pub fn matrix(&self) -> &BinMatrix {
        &self.matrix
    }

    pub fn pivot_cols(&self) -> &[usize] {
        &self.pivot_cols
    }

    pub fn dim(&self) -> usize {
        self.pivot_cols.len()
    }

    /// Length of the vectors spanned.
    pub fn ambient(&self) -> usize {
        self.matrix.cols
    }

    pub fn vectors(&self) -> Vec<BitVec> {
        (0..self.matrix.rows).map(|i| self.matrix.row(i)).collect()
    }

    /// Reduces `words` against the basis in place; the residue is zero iff the
    /// vector lies in the span.
    pub(crate) fn reduce_words(&self, words: &mut [u64]) {
        for (k, &p) in self.pivot_cols.iter().enumerate() {
            if words[p / WORD_BITS] >> (p % WORD_BITS) & 1 == 1 {
                xor_words(words, self.matrix.row_words(k));
            }
        }
    }

    pub(crate) fn contains_words(&self, words: &[u64]) -> bool {
        let mut w = words.to_vec();
        self.reduce_words(&mut w);
        w.iter().all(|&x| x == 0)
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        assert_eq!(
            v.len(),
            self.ambient(),
            "length mismatch in membership test"
        );
        self.contains_words(v.words())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BinMatrix> {
        (0..=max_rows, 0..=max_cols).prop_flat_map(|(r, c)| {
            proptest::collection::vec(any::<bool>(), r * c).prop_map(move |bits| {
                let rows: Vec<Vec<bool>> = bits
                    .chunks(c.max(1))
                    .take(r)
                    .map(<[bool]>::to_vec)
                    .collect();
                if c == 0 {
                    BinMatrix::zeros(r, 0)
                } else {
                    BinMatrix::from_bools(&rows, c)
                }
            })
        })
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BinMatrix::identity(3).rank(), 3);
        assert_eq!(BinMatrix::zeros(2, 4).rank(), 0);
        assert_eq!(BinMatrix::from_strs(&["110", "011", "101"]).rank(), 2);
    }

    #[test]
    fn multiply_examples() {
        let a = BinMatrix::from_strs(&["11"]);
        let b = BinMatrix::from_strs(&["1", "1"]);
        assert_eq!(a.multiply(&b).unwrap(), BinMatrix::zeros(1, 1));

        let m = BinMatrix::from_strs(&["101", "011", "110"]);
        assert_eq!(BinMatrix::identity(3).multiply(&m).unwrap(), m);

        let empty = BinMatrix::zeros(0, 5);
        let p = BinMatrix::zeros(5, 2);
        assert_eq!(empty.multiply(&p).unwrap().shape(), (0, 2));

        assert!(matches!(a.multiply(&a), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn kron_examples() {
        let m = BinMatrix::from_strs(&["10", "11"]);
        let k = BinMatrix::identity(2).kron(&m);
        assert_eq!(k, BinMatrix::from_strs(&["1000", "1100", "0010", "0011"]));

        let k = BinMatrix::from_strs(&["11"]).kron(&BinMatrix::from_strs(&["10"]));
        assert_eq!(k, BinMatrix::from_strs(&["1010"]));

        let a = BinMatrix::from_strs(&["110", "011"]);
        assert_eq!(a.kron(&BinMatrix::identity(1)), a);
        assert_eq!(a.kron(&BinMatrix::zeros(0, 3)).shape(), (0, 9));
    }

    #[test]
    fn kernel_examples() {
        let k = BinMatrix::from_strs(&["11"]).kernel_basis();
        assert_eq!(k.vectors(), vec!["11".parse::<BitVec>().unwrap()]);

        assert_eq!(BinMatrix::identity(4).kernel_basis().dim(), 0);

        let k = BinMatrix::zeros(2, 3).kernel_basis();
        assert_eq!(k.dim(), 3);
        assert_eq!(k.matrix(), &BinMatrix::identity(3));
    }

    #[test]
    fn column_space_examples() {
        assert_eq!(
            BinMatrix::identity(3).column_space_basis().matrix(),
            &BinMatrix::identity(3)
        );
        assert_eq!(BinMatrix::zeros(3, 2).column_space_basis().dim(), 0);
        let b = BinMatrix::from_strs(&["1", "1"]).column_space_basis();
        assert_eq!(b.vectors(), vec!["11".parse::<BitVec>().unwrap()]);
    }

    #[test]
    fn solve_examples() {
        let y: BitVec = "101".parse().unwrap();
        assert_eq!(BinMatrix::identity(3).solve(&y).unwrap(), Some(y));

        let col = BinMatrix::from_strs(&["1", "1"]);
        assert_eq!(col.solve(&"10".parse().unwrap()).unwrap(), None);

        let row = BinMatrix::from_strs(&["11"]);
        let x = row.solve(&"1".parse().unwrap()).unwrap().unwrap();
        assert!(x == "10".parse().unwrap() || x == "01".parse().unwrap());

        assert!(matches!(
            row.solve(&"11".parse().unwrap()),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn padding_stays_clear() {
        let m = BinMatrix::from_strs(&["1111111"]);
        let t = m.transpose().transpose();
        assert_eq!(t, m);
        let mut v = BitVec::zeros(70);
        v.set(69, true);
        assert_eq!(v.words()[1], 1 << 5);
    }

    proptest! {
        #[test]
        fn rank_is_transpose_invariant(m in arb_matrix(64, 64)) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn rank_nullity(m in arb_matrix(40, 70)) {
            let kernel = m.kernel_basis();
            prop_assert_eq!(m.cols(), m.rank() + kernel.dim());
            for v in kernel.vectors() {
                prop_assert!(m.mul_vec(&v).unwrap().is_zero());
            }
        }

        #[test]
        fn kernel_span_is_annihilated(m in arb_matrix(12, 16), mask in any::<u32>()) {
            let kernel = m.kernel_basis();
            let mut x = BitVec::zeros(m.cols());
            for (i, v) in kernel.vectors().iter().enumerate() {
                if mask >> (i % 32) & 1 == 1 {
                    x.xor_assign(v);
                }
            }
            prop_assert!(m.mul_vec(&x).unwrap().is_zero());
        }

        #[test]
        fn solve_is_sound(m in arb_matrix(20, 20), bits in proptest::collection::vec(any::<bool>(), 20)) {
            let y = BitVec::from_bools(&bits[..m.rows()]);
            match m.solve(&y).unwrap() {
                Some(x) => prop_assert_eq!(m.mul_vec(&x).unwrap(), y),
                None => prop_assert!(m.with_column(&y).rank() > m.rank()),
            }
        }

        #[test]
        fn kron_mixed_product(
            a in arb_matrix(4, 4),
            b in arb_matrix(4, 4),
            seed in any::<u64>(),
        ) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut random = |r: usize, c: usize| {
                BinMatrix::from_entries(r, c, (0..r).flat_map(|i| (0..c).map(move |j| (i, j))).collect::<Vec<_>>().into_iter().filter(|_| rng.gen_bool(0.5)))
            };
            let c = random(a.cols(), 3);
            let d = random(b.cols(), 2);
            let lhs = a.kron(&b).multiply(&c.kron(&d)).unwrap();
            let rhs = a.multiply(&c).unwrap().kron(&b.multiply(&d).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn column_space_membership(m in arb_matrix(10, 10), mask in any::<u16>()) {
            let basis = m.column_space_basis();
            prop_assert_eq!(basis.dim(), m.rank());
            let mut y = BitVec::zeros(m.rows());
            for j in 0..m.cols() {
                if mask >> j & 1 == 1 {
                    y.xor_assign(&m.column(j));
                }
            }
            prop_assert!(basis.contains(&y));
        }
    }
}
