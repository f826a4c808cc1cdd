//! Defining vectors: codes built from multisets of simplex columns.
//!
//! The nonzero vectors of `F_2^k` are laid out in the recursive simplex
//! order `S_{k+1} = (S_k 0 S_k / 0 1 1)`. Unrolling the recursion shows the
//! `i`-th column (1-based) is the binary expansion of `i` with row `r`
//! holding bit `r`, so a point is stored as the integer `i` and point index
//! `p` (0-based) refers to the column value `p + 1`. [`PointTable`] still
//! builds the order from the recursion and the tests pin the two together.
//!
//! A defining vector `L` lists how many copies of each column a generator
//! matrix carries. The weight vector is `W = P_k L` where row `u` of `P_k` is
//! the codeword `u * S_k`; everything below is exact integer arithmetic.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::BitMatrix;

pub const MIN_K: usize = 2;
pub const MAX_K: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DefiningError {
    #[error("dimension k={0} outside supported range {MIN_K}..={MAX_K}")]
    DimensionOutOfRange(usize),
    #[error("expected {expected} entries for k={k}, got {got}")]
    LengthMismatch {
        k: usize,
        expected: usize,
        got: usize,
    },
    #[error("cannot infer k from {0} entries (need 2^k - 1)")]
    UnknownLength(usize),
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("point index {index} out of range for {points} points")]
    PointIndex { index: usize, points: usize },
    #[error("MacDonald parameter m={m} must satisfy 1 <= m <= {max}")]
    MacDonaldRange { m: usize, max: usize },
    #[error("entry {index} of P^-1 W is not an integer")]
    NonIntegral { index: usize },
    #[error("entry {index} of P^-1 W is negative")]
    Negative { index: usize },
}

pub fn point_count(k: usize) -> usize {
    (1 << k) - 1
}

fn check_k(k: usize) -> Result<(), DefiningError> {
    if (MIN_K..=MAX_K).contains(&k) {
        Ok(())
    } else {
        Err(DefiningError::DimensionOutOfRange(k))
    }
}

#[inline]
pub(crate) fn parity(x: u32) -> u32 {
    x.count_ones() & 1
}

/// The nonzero columns of `S_k` in recursive order, with the inverse map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointTable {
    k: usize,
    columns: Vec<u32>,
    index_of: Vec<Option<usize>>,
}

impl PointTable {
    pub fn new(k: usize) -> Result<Self, DefiningError> {
        check_k(k)?;
        let mut columns: Vec<u32> = vec![0b01, 0b10, 0b11];
        for level in 2..k {
            let top = 1u32 << level;
            let mut next = columns.clone();
            next.push(top);
            next.extend(columns.iter().map(|c| c | top));
            columns = next;
        }
        let mut index_of = vec![None; 1 << k];
        for (i, &c) in columns.iter().enumerate() {
            index_of[c as usize] = Some(i);
        }
        Ok(Self {
            k,
            columns,
            index_of,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn columns(&self) -> &[u32] {
        &self.columns
    }

    pub fn column(&self, index: usize) -> u32 {
        self.columns[index]
    }

    /// Index of a nonzero column value; `None` for zero or out-of-range values.
    pub fn index_of(&self, value: u32) -> Option<usize> {
        self.index_of.get(value as usize).copied().flatten()
    }
}

pub fn build_point_table(k: usize) -> Result<PointTable, DefiningError> {
    PointTable::new(k)
}

/// Generator of the `[2^k - 1, k, 2^(k-1)]` simplex code.
pub fn build_simplex(k: usize) -> Result<BitMatrix, DefiningError> {
    let table = PointTable::new(k)?;
    Ok(BitMatrix::from_column_words(k, table.columns()))
}

/// The last `2^k - 2^m` columns of `S_k`, generating the MacDonald code
/// `[2^k - 2^m, k, 2^(k-1) - 2^(m-1)]`.
pub fn build_macdonald(k: usize, m: usize) -> Result<BitMatrix, DefiningError> {
    let table = PointTable::new(k)?;
    if m == 0 || m >= k {
        return Err(DefiningError::MacDonaldRange { m, max: k - 1 });
    }
    let skip = (1usize << m) - 1;
    Ok(BitMatrix::from_column_words(k, &table.columns()[skip..]))
}

/// Defining vector of the MacDonald code: zeros on the first `2^m - 1` points.
pub fn macdonald_vector(k: usize, m: usize) -> Result<DefiningVector, DefiningError> {
    check_k(k)?;
    if m == 0 || m >= k {
        return Err(DefiningError::MacDonaldRange { m, max: k - 1 });
    }
    let skip = (1usize << m) - 1;
    let entries = (0..point_count(k)).map(|i| u32::from(i >= skip)).collect();
    DefiningVector::new(k, entries)
}

/// `P_k` and `Q_k = J - P_k` as dense 0/1 integer matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralPair {
    k: usize,
    p: Vec<Vec<i64>>,
    q: Vec<Vec<i64>>,
}

impl SpectralPair {
    /// Builds `P_k` by the block recursion starting from `P_2`.
    pub fn new(k: usize) -> Result<Self, DefiningError> {
        check_k(k)?;
        let mut p: Vec<Vec<i64>> = vec![vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 0]];
        for _ in 2..k {
            let n = p.len();
            let q: Vec<Vec<i64>> = p
                .iter()
                .map(|r| r.iter().map(|v| 1 - v).collect())
                .collect();
            let mut next = Vec::with_capacity(2 * n + 1);
            for row in &p {
                let mut r = row.clone();
                r.push(0);
                r.extend_from_slice(row);
                next.push(r);
            }
            let mut mid = vec![0; n];
            mid.push(1);
            mid.extend(std::iter::repeat(1).take(n));
            next.push(mid);
            for (row, qrow) in p.iter().zip(&q) {
                let mut r = row.clone();
                r.push(1);
                r.extend_from_slice(qrow);
                next.push(r);
            }
            p = next;
        }
        let q = p
            .iter()
            .map(|r| r.iter().map(|v| 1 - v).collect())
            .collect();
        Ok(Self { k, p, q })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn p(&self) -> &[Vec<i64>] {
        &self.p
    }

    pub fn q(&self) -> &[Vec<i64>] {
        &self.q
    }

    /// `P_k * (J - 2 Q_k)` over the integers; equals `2^(k-1) I`.
    pub fn inverse_check(&self) -> Vec<Vec<i64>> {
        let n = self.p.len();
        let mut out = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                out[i][j] = (0..n).map(|m| self.p[i][m] * (1 - 2 * self.q[m][j])).sum();
            }
        }
        out
    }
}

pub fn build_spectral(k: usize) -> Result<SpectralPair, DefiningError> {
    SpectralPair::new(k)
}

/// Multiplicities of the simplex columns making up a generator matrix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DefiningVector {
    k: usize,
    entries: Vec<u32>,
}

impl DefiningVector {
    pub fn new(k: usize, entries: Vec<u32>) -> Result<Self, DefiningError> {
        check_k(k)?;
        let expected = point_count(k);
        if entries.len() != expected {
            return Err(DefiningError::LengthMismatch {
                k,
                expected,
                got: entries.len(),
            });
        }
        Ok(Self { k, entries })
    }

    pub fn constant(k: usize, value: u32) -> Result<Self, DefiningError> {
        check_k(k)?;
        Ok(Self {
            k,
            entries: vec![value; point_count(k)],
        })
    }

    pub fn zero(k: usize) -> Result<Self, DefiningError> {
        Self::constant(k, 0)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<u32> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Code length `n`.
    pub fn length(&self) -> u64 {
        self.entries.iter().map(|&v| u64::from(v)).sum()
    }

    pub fn max_entry(&self) -> u32 {
        self.entries.iter().copied().max().unwrap_or(0)
    }

    pub fn min_entry(&self) -> u32 {
        self.entries.iter().copied().min().unwrap_or(0)
    }

    /// Dimension of the span of the support; `< k` means the code is degenerate.
    pub fn support_rank(&self) -> usize {
        let mut basis = [0u32; 32];
        let mut rank = 0;
        for (i, &l) in self.entries.iter().enumerate() {
            if l == 0 {
                continue;
            }
            let mut v = (i + 1) as u32;
            for b in basis.iter().take(self.k).rev() {
                if *b != 0 {
                    v = v.min(v ^ b);
                }
            }
            if v != 0 {
                let top = 31 - v.leading_zeros() as usize;
                basis[top] = v;
                rank += 1;
            }
        }
        rank
    }

    pub fn is_degenerate(&self) -> bool {
        self.support_rank() < self.k
    }

    /// Digit string when every entry is a single digit, comma list otherwise.
    pub fn to_text(&self) -> String {
        if self.entries.iter().all(|&v| v <= 9) {
            self.entries
                .iter()
                .map(|&v| char::from(b'0' + v as u8))
                .collect()
        } else {
            self.entries
                .iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join(",")
        }
    }

    /// Parses either a contiguous digit string or comma-separated integers.
    /// Whitespace and one pair of surrounding parentheses are ignored; `k` is
    /// inferred from the entry count.
    pub fn parse(text: &str) -> Result<Self, DefiningError> {
        let entries = parse_entries(text)?;
        let len = entries.len();
        let k = (MIN_K..=MAX_K)
            .find(|&k| point_count(k) == len)
            .ok_or(DefiningError::UnknownLength(len))?;
        Self::new(k, entries)
    }

    pub fn parse_with_k(text: &str, k: usize) -> Result<Self, DefiningError> {
        Self::new(k, parse_entries(text)?)
    }
}

fn parse_entries(text: &str) -> Result<Vec<u32>, DefiningError> {
    let trimmed = text.trim();
    let offset = text.len() - text.trim_start().len();
    let (body, offset) = match trimmed.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        Some(inner) => (inner, offset + 1),
        None => (trimmed, offset),
    };
    if body.is_empty() {
        return Err(DefiningError::Parse {
            position: offset,
            message: "empty vector".into(),
        });
    }
    if body.contains(',') {
        let mut out = Vec::new();
        let mut pos = offset;
        for field in body.split(',') {
            let lead = field.len() - field.trim_start().len();
            let value = field.trim();
            let parsed = value.parse::<u32>().map_err(|_| DefiningError::Parse {
                position: pos + lead,
                message: format!("invalid entry {value:?}"),
            })?;
            out.push(parsed);
            pos += field.len() + 1;
        }
        Ok(out)
    } else {
        body.char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .map(|(i, c)| {
                c.to_digit(10).ok_or_else(|| DefiningError::Parse {
                    position: offset + i,
                    message: format!("unexpected character {c:?}"),
                })
            })
            .collect()
    }
}

impl FromStr for DefiningVector {
    type Err = DefiningError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl fmt::Display for DefiningVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for DefiningVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DefiningVector(k={}, {})", self.k, self.to_text())
    }
}

/// Weights of the `2^k - 1` nonzero codewords, indexed like the points:
/// entry `u` is the weight of the codeword selected by message `u + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightVector {
    k: usize,
    weights: Vec<u64>,
}

impl WeightVector {
    pub fn new(k: usize, weights: Vec<u64>) -> Result<Self, DefiningError> {
        check_k(k)?;
        let expected = point_count(k);
        if weights.len() != expected {
            return Err(DefiningError::LengthMismatch {
                k,
                expected,
                got: weights.len(),
            });
        }
        Ok(Self { k, weights })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn min_distance(&self) -> u64 {
        self.weights.iter().copied().min().unwrap_or(0)
    }

    /// `Lambda = W - d * 1`.
    pub fn excess(&self) -> Vec<u64> {
        let d = self.min_distance();
        self.weights.iter().map(|w| w - d).collect()
    }

    pub fn sigma(&self) -> i64 {
        self.excess().iter().sum::<u64>() as i64
    }

    /// Code length recovered from `sum(W) = n * 2^(k-1)`.
    pub fn length(&self) -> u64 {
        self.weights.iter().sum::<u64>() >> (self.k - 1)
    }

    pub fn sorted(&self) -> Vec<u64> {
        let mut w = self.weights.clone();
        w.sort_unstable();
        w
    }
}

/// `W^T = P_k L^T`.
pub fn weight_vector(l: &DefiningVector) -> WeightVector {
    let weights = (1..=point_count(l.k) as u32)
        .map(|u| {
            l.entries
                .iter()
                .enumerate()
                .filter(|(j, _)| parity(u & (*j as u32 + 1)) == 1)
                .map(|(_, &v)| u64::from(v))
                .sum()
        })
        .collect();
    WeightVector { k: l.k, weights }
}

/// Solves `L^T = 2^-(k-1) [(d + sigma) 1^T - 2 Q_k Lambda^T]` exactly.
/// Non-integral or negative entries mean no code has this weight vector.
pub fn defining_vector_from_weights(w: &WeightVector) -> Result<DefiningVector, DefiningError> {
    let k = w.k;
    let n = point_count(k);
    let d = w.min_distance() as i64;
    let lambda = w.excess();
    let sigma: i64 = lambda.iter().map(|&v| v as i64).sum();
    let scale = 1i64 << (k - 1);
    let mut entries = Vec::with_capacity(n);
    for i in 0..n {
        let row = (i + 1) as u32;
        let q_lambda: i64 = lambda
            .iter()
            .enumerate()
            .filter(|(j, _)| parity(row & (*j as u32 + 1)) == 0)
            .map(|(_, &v)| v as i64)
            .sum();
        let numerator = d + sigma - 2 * q_lambda;
        if numerator.rem_euclid(scale) != 0 {
            return Err(DefiningError::NonIntegral { index: i });
        }
        if numerator < 0 {
            return Err(DefiningError::Negative { index: i });
        }
        entries.push((numerator / scale) as u32);
    }
    DefiningVector::new(k, entries)
}

/// `sigma = 2^(k-1) n - d (2^k - 1)`; negative when `(n, d)` is infeasible.
pub fn sigma(n: u64, k: usize, d: u64) -> i64 {
    (1i64 << (k - 1)) * n as i64 - d as i64 * point_count(k) as i64
}

/// Value/multiplicity pairs of a defining vector, values ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TypeSignature(pub Vec<(u32, usize)>);

impl TypeSignature {
    pub fn of(l: &DefiningVector) -> Self {
        let mut sorted = l.entries.clone();
        sorted.sort_unstable();
        let mut pairs: Vec<(u32, usize)> = Vec::new();
        for v in sorted {
            match pairs.last_mut() {
                Some((last, count)) if *last == v => *count += 1,
                _ => pairs.push((v, 1)),
            }
        }
        TypeSignature(pairs)
    }

    pub fn multiplicity(&self, value: u32) -> usize {
        self.0
            .iter()
            .find(|(v, _)| *v == value)
            .map_or(0, |(_, m)| *m)
    }
}

impl fmt::Display for TypeSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("]]")?;
        for (i, (v, m)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "({v})_{m}")?;
        }
        f.write_str("]]")
    }
}

/// Parses `]](0)_1|(1)_0|(2)_18|(3)_12]]`; zero multiplicities are dropped.
impl FromStr for TypeSignature {
    type Err = DefiningError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |message: String| DefiningError::Parse {
            position: 0,
            message,
        };
        let body = s.trim().trim_start_matches("]]").trim_end_matches("]]");
        let mut pairs: Vec<(u32, usize)> = Vec::new();
        for part in body.split('|') {
            let part = part.trim();
            let (value, mult) = part
                .strip_prefix('(')
                .and_then(|p| p.split_once(")_"))
                .ok_or_else(|| bad(format!("bad type part {part:?}")))?;
            let value: u32 = value
                .parse()
                .map_err(|_| bad(format!("bad value {value:?}")))?;
            let mult: usize = mult
                .parse()
                .map_err(|_| bad(format!("bad multiplicity {mult:?}")))?;
            if pairs.last().is_some_and(|(v, _)| *v >= value) {
                return Err(bad(format!("values out of order at {part:?}")));
            }
            if mult > 0 {
                pairs.push((value, mult));
            }
        }
        Ok(TypeSignature(pairs))
    }
}

pub fn type_signature(l: &DefiningVector) -> TypeSignature {
    TypeSignature::of(l)
}

/// Splits `L = base * 1 + L'` with `base = l_min`.
pub fn normalize(l: &DefiningVector) -> (u32, DefiningVector) {
    let base = l.min_entry();
    let reduced = DefiningVector {
        k: l.k,
        entries: l.entries.iter().map(|v| v - base).collect(),
    };
    (base, reduced)
}

/// Adds `copies` simplex codes: `L + copies * 1`.
pub fn juxtapose(l: &DefiningVector, copies: u32) -> DefiningVector {
    DefiningVector {
        k: l.k,
        entries: l.entries.iter().map(|v| v + copies).collect(),
    }
}

/// Quotient map `F_2^k -> F_2^(k-1)` killing the point `pivot`.
///
/// The basis is `pivot` followed by points taken greedily in table order;
/// a vector's image is its coordinates on basis vectors 2..k.
#[derive(Debug, Clone)]
pub struct Quotient {
    k: usize,
    inverse_basis: [u32; 32],
}

impl Quotient {
    pub fn new(k: usize, pivot: u32) -> Self {
        let mut basis: Vec<u32> = vec![pivot];
        let mut echelon: Vec<u32> = vec![pivot];
        for candidate in 1..(1u32 << k) {
            if basis.len() == k {
                break;
            }
            let mut v = candidate;
            for &e in &echelon {
                v = v.min(v ^ e);
            }
            if v != 0 {
                echelon.push(v);
                echelon.sort_unstable_by(|a, b| b.cmp(a));
                basis.push(candidate);
            }
        }
        let mut columns = [0u32; 32];
        columns[..k].copy_from_slice(&basis);
        let matrix = BitMatrix::from_column_words(k, &columns[..k]);
        let inverse = matrix.inverse().expect("greedy basis is independent");
        let mut inverse_basis = [0u32; 32];
        for (j, slot) in inverse_basis.iter_mut().enumerate().take(k) {
            *slot = inverse.column_word(j);
        }
        Self { k, inverse_basis }
    }

    /// Coordinates of `x` in the chosen basis.
    pub fn coordinates(&self, x: u32) -> u32 {
        (0..self.k)
            .filter(|&j| (x >> j) & 1 == 1)
            .fold(0, |acc, j| acc ^ self.inverse_basis[j])
    }

    /// Image in `F_2^(k-1)`; zero exactly on the span of the pivot.
    pub fn project(&self, x: u32) -> u32 {
        self.coordinates(x) >> 1
    }
}

/// Reduced code at point index `point`: removes the `l_p` copies of the pivot
/// column and merges each pair `{a, a + pivot}` into one point of dimension
/// `k - 1`. Returns `(l_p, reduced)`.
pub fn reduce_at_point(
    l: &DefiningVector,
    point: usize,
) -> Result<(u32, DefiningVector), DefiningError> {
    let n = point_count(l.k);
    if point >= n {
        return Err(DefiningError::PointIndex {
            index: point,
            points: n,
        });
    }
    check_k(l.k - 1)?;
    let pivot = (point + 1) as u32;
    let quotient = Quotient::new(l.k, pivot);
    let mut entries = vec![0u32; point_count(l.k - 1)];
    for (i, &v) in l.entries.iter().enumerate() {
        if i == point {
            continue;
        }
        let image = quotient.project((i + 1) as u32);
        entries[image as usize - 1] += v;
    }
    Ok((
        l.entries[point],
        DefiningVector {
            k: l.k - 1,
            entries,
        },
    ))
}

/// Appends the overall parity column.
pub fn extend_parity(g: &BitMatrix) -> BitMatrix {
    let mut parity_col = BitMatrix::zeros(g.rows(), 1);
    for r in 0..g.rows() {
        if g.row_weight(r) % 2 == 1 {
            parity_col.set(r, 0, true);
        }
    }
    g.hstack(&parity_col).expect("row counts agree")
}

/// `G = (l_1 a_1, ..., l_N a_N)` with columns grouped by ascending point.
pub fn generator_from(l: &DefiningVector) -> BitMatrix {
    let columns: Vec<u32> = l
        .entries
        .iter()
        .enumerate()
        .flat_map(|(i, &v)| std::iter::repeat((i + 1) as u32).take(v as usize))
        .collect();
    BitMatrix::from_column_words(l.k, &columns)
}

/// Defining vector of a generator matrix with at most 32 rows; zero columns
/// are dropped and reported in the second field.
pub fn defining_vector_of(g: &BitMatrix) -> Result<(DefiningVector, usize), DefiningError> {
    let k = g.rows();
    check_k(k)?;
    let mut entries = vec![0u32; point_count(k)];
    let mut zero_columns = 0;
    for j in 0..g.cols() {
        match g.column_word(j) {
            0 => zero_columns += 1,
            c => entries[c as usize - 1] += 1,
        }
    }
    Ok((DefiningVector { k, entries }, zero_columns))
}
