//! Bit-packed dense matrices over GF(2).
//!
//! Rows are stored row-major as `u64` words. Bits beyond `cols` in the last
//! word of each row are always zero, so whole-word comparisons and XORs are
//! exact.

use std::fmt;

use thiserror::Error;

const WORD: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("dimension mismatch: {left_rows}x{left_cols} times {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular")]
    Singular,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = cols.div_ceil(WORD);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of 0/1 entries. Any nonzero byte counts as 1.
    ///
    /// Panics if the rows have different lengths.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            assert_eq!(row.len(), cols, "ragged row {i}");
            for (j, &bit) in row.iter().enumerate() {
                if bit != 0 {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Builds a `rows x cols` matrix whose column `j` is the low `rows` bits
    /// of `columns[j]` (bit `r` lands in row `r`).
    pub fn from_column_words(rows: usize, columns: &[u32]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, &c) in columns.iter().enumerate() {
            for r in 0..rows {
                if (c >> r) & 1 == 1 {
                    m.set(r, j, true);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        assert!(
            row < self.rows && col < self.cols,
            "index ({row},{col}) out of range"
        );
        (self.data[row * self.stride + col / WORD] >> (col % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        assert!(
            row < self.rows && col < self.cols,
            "index ({row},{col}) out of range"
        );
        let word = &mut self.data[row * self.stride + col / WORD];
        let mask = 1u64 << (col % WORD);
        if value {
            *word |= mask;
        } else {
            *word &= !mask;
        }
    }

    pub fn row_words(&self, row: usize) -> &[u64] {
        &self.data[row * self.stride..(row + 1) * self.stride]
    }

    /// Column `j` packed into an integer, row `r` at bit `r`. Requires `rows <= 32`.
    pub fn column_word(&self, col: usize) -> u32 {
        assert!(self.rows <= 32, "column_word needs at most 32 rows");
        (0..self.rows).fold(0, |acc, r| acc | (u32::from(self.get(r, col)) << r))
    }

    pub fn row_weight(&self, row: usize) -> usize {
        self.row_words(row)
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    t.set(j, i, true);
                }
            }
        }
        t
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        let (s, d) = (src * self.stride, dst * self.stride);
        for w in 0..self.stride {
            let v = self.data[s + w];
            self.data[d + w] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.data.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    pub fn multiply(&self, other: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
        if self.cols != other.rows {
            return Err(Gf2Error::DimensionMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get(i, k) {
                    let src = other.row_words(k);
                    let dst = &mut out.data[i * out.stride..(i + 1) * out.stride];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d ^= s;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `G * G^T`, computed from row inner products.
    pub fn gram(&self) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows, self.rows);
        for i in 0..self.rows {
            for j in i..self.rows {
                let parity = self
                    .row_words(i)
                    .iter()
                    .zip(self.row_words(j))
                    .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
                    & 1;
                if parity == 1 {
                    out.set(i, j, true);
                    out.set(j, i, true);
                }
            }
        }
        out
    }

    /// Row rank by Gaussian elimination on a copy.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(pivot) = (rank..m.rows).find(|&r| m.get(r, col)) else {
                continue;
            };
            m.swap_rows(pivot, rank);
            for r in 0..m.rows {
                if r != rank && m.get(r, col) {
                    m.xor_row_into(rank, r);
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_invertible(&self) -> Result<bool, Gf2Error> {
        if !self.is_square() {
            return Err(Gf2Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(self.rank() == self.rows)
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<BitMatrix, Gf2Error> {
        if !self.is_square() {
            return Err(Gf2Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = self.hstack(&BitMatrix::identity(n))?;
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| aug.get(r, col))
                .ok_or(Gf2Error::Singular)?;
            aug.swap_rows(pivot, col);
            for r in 0..n {
                if r != col && aug.get(r, col) {
                    aug.xor_row_into(col, r);
                }
            }
        }
        let mut inv = BitMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if aug.get(i, n + j) {
                    inv.set(i, j, true);
                }
            }
        }
        Ok(inv)
    }

    /// Side-by-side concatenation `(self | other)`.
    pub fn hstack(&self, other: &BitMatrix) -> Result<BitMatrix, Gf2Error> {
        if self.rows != other.rows {
            return Err(Gf2Error::DimensionMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        let mut out = BitMatrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    out.set(i, j, true);
                }
            }
            for j in 0..other.cols {
                if other.get(i, j) {
                    out.set(i, self.cols + j, true);
                }
            }
        }
        Ok(out)
    }

    pub fn permute_rows(&self, order: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows, self.cols);
        for (dst, &src) in order.iter().enumerate() {
            out.data[dst * self.stride..(dst + 1) * self.stride]
                .copy_from_slice(self.row_words(src));
        }
        out
    }

    pub fn permute_cols(&self, order: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for (dst, &src) in order.iter().enumerate() {
                if self.get(i, src) {
                    out.set(i, dst, true);
                }
            }
        }
        out
    }

    /// Weight of the codeword `message * self`, with `message` bit `r`
    /// selecting row `r`.
    pub fn codeword_weight(&self, message: u64) -> usize {
        let mut acc = vec![0u64; self.stride];
        for r in 0..self.rows {
            if (message >> r) & 1 == 1 {
                for (a, w) in acc.iter_mut().zip(self.row_words(r)) {
                    *a ^= w;
                }
            }
        }
        acc.iter().map(|w| w.count_ones() as usize).sum()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                f.write_str(if self.get(i, j) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s2() -> BitMatrix {
        BitMatrix::from_rows(&[[1, 0, 1], [0, 1, 1]])
    }

    #[test]
    fn identity_products() {
        let i5 = BitMatrix::identity(5);
        assert_eq!(i5.multiply(&i5).unwrap(), i5);
        assert_eq!(i5.gram(), i5);
        assert!(i5.is_invertible().unwrap());
    }

    #[test]
    fn small_simplex_gram() {
        let expected = BitMatrix::from_rows(&[[0, 1], [1, 0]]);
        assert_eq!(s2().multiply(&s2().transpose()).unwrap(), expected);
        assert_eq!(s2().gram(), expected);
    }

    #[test]
    fn dimension_errors() {
        let a = BitMatrix::zeros(2, 3);
        assert!(matches!(
            a.multiply(&a),
            Err(Gf2Error::DimensionMismatch { .. })
        ));
        assert!(matches!(a.is_invertible(), Err(Gf2Error::NotSquare { .. })));
        assert_eq!(BitMatrix::zeros(5, 5).is_invertible(), Ok(false));
        assert_eq!(BitMatrix::zeros(5, 5).inverse(), Err(Gf2Error::Singular));
    }

    #[test]
    fn empty_shapes_have_rank_zero() {
        assert_eq!(BitMatrix::zeros(0, 7).rank(), 0);
        assert_eq!(BitMatrix::zeros(7, 0).rank(), 0);
        assert_eq!(BitMatrix::zeros(5, 31).rank(), 0);
        assert_eq!(BitMatrix::zeros(0, 0).is_invertible(), Ok(true));
    }

    #[test]
    fn wide_rows_cross_word_boundaries() {
        let mut m = BitMatrix::zeros(3, 130);
        m.set(0, 64, true);
        m.set(1, 129, true);
        m.set(2, 64, true);
        m.set(2, 129, true);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.row_weight(2), 2);
        assert_eq!(m.codeword_weight(0b011), 2);
        assert_eq!(m.codeword_weight(0b111), 0);
    }

    fn arb_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BitMatrix> {
        (0..=max_rows, 0..=max_cols).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(0u8..2, c), r).prop_map(move |rows| {
                if rows.is_empty() {
                    BitMatrix::zeros(0, c)
                } else {
                    BitMatrix::from_rows(&rows)
                }
            })
        })
    }

    proptest! {
        #[test]
        fn rank_equals_transpose_rank(a in arb_matrix(8, 70)) {
            prop_assert_eq!(a.rank(), a.transpose().rank());
            prop_assert!(a.rank() <= a.rows().min(a.cols()));
        }

        #[test]
        fn gram_is_symmetric(a in arb_matrix(8, 70)) {
            let g = a.gram();
            prop_assert_eq!(g.transpose(), g.clone());
            prop_assert_eq!(g, a.multiply(&a.transpose()).unwrap());
        }

        #[test]
        fn rank_invariant_under_permutations(a in arb_matrix(6, 20), seed in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut rows: Vec<usize> = (0..a.rows()).collect();
            let mut cols: Vec<usize> = (0..a.cols()).collect();
            rows.shuffle(&mut rng);
            cols.shuffle(&mut rng);
            prop_assert_eq!(a.permute_rows(&rows).permute_cols(&cols).rank(), a.rank());
        }

        #[test]
        fn inverse_when_invertible(a in arb_matrix(6, 6).prop_filter("square", |m| m.is_square())) {
            if a.is_invertible().unwrap() {
                let inv = a.inverse().unwrap();
                prop_assert_eq!(a.multiply(&inv).unwrap(), BitMatrix::identity(a.rows()));
            } else {
                prop_assert_eq!(a.inverse(), Err(Gf2Error::Singular));
            }
        }
    }
}
