//! Code-level quantities: hull dimension, LCD/SO predicates, weight
//! enumerators, the Griesmer bound and the `d_a(n,5)` / `d_l(n,5)` tables.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::defining::{weight_vector, DefiningVector};
use crate::gf2::BitMatrix;

/// `k - rank(G G^T)`, with `k` the number of rows of `g`.
pub fn hull_dimension(g: &BitMatrix) -> usize {
    g.rows() - g.gram().rank()
}

pub fn is_lcd(g: &BitMatrix) -> bool {
    g.gram().is_invertible().expect("gram matrix is square")
}

pub fn is_self_orthogonal(g: &BitMatrix) -> bool {
    g.gram().is_zero()
}

/// Gram matrix of `generator_from(l)` without materializing the generator:
/// entry `(a, b)` is the parity of the multiplicity mass on points having
/// both coordinates set, so only odd entries of `l` matter.
pub fn gram_of(l: &DefiningVector) -> BitMatrix {
    let k = l.k();
    let mut acc = vec![0u8; k * k];
    for (i, &v) in l.entries().iter().enumerate() {
        if v % 2 == 0 {
            continue;
        }
        let x = (i + 1) as u32;
        for a in 0..k {
            if (x >> a) & 1 == 0 {
                continue;
            }
            for b in 0..k {
                if (x >> b) & 1 == 1 {
                    acc[a * k + b] ^= 1;
                }
            }
        }
    }
    let mut g = BitMatrix::zeros(k, k);
    for a in 0..k {
        for b in 0..k {
            if acc[a * k + b] == 1 {
                g.set(a, b, true);
            }
        }
    }
    g
}

pub fn hull_dimension_of(l: &DefiningVector) -> usize {
    l.k() - gram_of(l).rank()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumeratorParseError {
    #[error("bad weight enumerator term {0:?}")]
    Term(String),
}

/// Nonzero-codeword weight distribution `{weight -> count}`.
///
/// `symbolic_base`, when set, renders exponents as `16s + (w - base)` the way
/// s-parameterized families are written.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct WeightEnumerator {
    pub terms: BTreeMap<u64, u64>,
    pub symbolic_base: Option<u64>,
}

impl WeightEnumerator {
    pub fn from_weights(weights: &[u64]) -> Self {
        let mut terms = BTreeMap::new();
        for &w in weights {
            *terms.entry(w).or_insert(0) += 1;
        }
        Self {
            terms,
            symbolic_base: None,
        }
    }

    pub fn total(&self) -> u64 {
        self.terms.values().sum()
    }

    pub fn min_weight(&self) -> Option<u64> {
        self.terms.keys().next().copied()
    }

    pub fn with_symbolic_base(mut self, base: u64) -> Self {
        self.symbolic_base = Some(base);
        self
    }

    /// Shifts every exponent by `delta` (juxtaposing simplex copies).
    pub fn shifted(&self, delta: u64) -> Self {
        Self {
            terms: self.terms.iter().map(|(w, c)| (w + delta, *c)).collect(),
            symbolic_base: self.symbolic_base.map(|b| b + delta),
        }
    }

    /// Compact machine form: `22:23;24:7;30:1`.
    pub fn to_compact(&self) -> String {
        self.terms
            .iter()
            .map(|(w, c)| format!("{w}:{c}"))
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn from_compact(text: &str) -> Result<Self, EnumeratorParseError> {
        let mut terms = BTreeMap::new();
        for part in text.split(';').filter(|p| !p.trim().is_empty()) {
            let (w, c) = part
                .split_once(':')
                .ok_or_else(|| EnumeratorParseError::Term(part.to_string()))?;
            let w: u64 = w
                .trim()
                .parse()
                .map_err(|_| EnumeratorParseError::Term(part.into()))?;
            let c: u64 = c
                .trim()
                .parse()
                .map_err(|_| EnumeratorParseError::Term(part.into()))?;
            *terms.entry(w).or_insert(0) += c;
        }
        Ok(Self {
            terms,
            symbolic_base: None,
        })
    }

    /// Polynomial form `1+23y^{16s+6}+7y^{16s+8}` (symbolic) or `1+23y^22+...`.
    pub fn to_polynomial(&self) -> String {
        let mut out = String::from("1");
        for (w, c) in &self.terms {
            out.push('+');
            if *c != 1 {
                out.push_str(&c.to_string());
            }
            match self.symbolic_base {
                Some(base) => {
                    let offset = *w as i64 - base as i64;
                    match offset.cmp(&0) {
                        std::cmp::Ordering::Greater => out.push_str(&format!("y^{{16s+{offset}}}")),
                        std::cmp::Ordering::Equal => out.push_str("y^{16s}"),
                        std::cmp::Ordering::Less => out.push_str(&format!("y^{{16s{offset}}}")),
                    }
                }
                None => out.push_str(&format!("y^{w}")),
            }
        }
        out
    }

    /// Parses polynomial text as printed in s-parameterized tables, e.g.
    /// `1+18y^{16s+4}+8y^{16s+6}`. Exponents become offsets from `16s`;
    /// repeated exponents are summed. Plain integer exponents are accepted too.
    pub fn parse_polynomial(text: &str) -> Result<Self, EnumeratorParseError> {
        let cleaned: String = text
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '!' && *c != '$' && *c != '(' && *c != ')')
            .collect();
        let mut terms = BTreeMap::new();
        let mut symbolic = false;
        for (i, raw) in split_terms(&cleaned).into_iter().enumerate() {
            if i == 0 && raw == "1" {
                continue;
            }
            let Some((coef, exp)) = raw.split_once("y^") else {
                return Err(EnumeratorParseError::Term(raw));
            };
            let count: u64 = if coef.is_empty() {
                1
            } else {
                coef.parse()
                    .map_err(|_| EnumeratorParseError::Term(raw.clone()))?
            };
            let exp = exp.trim_start_matches('{').trim_end_matches('}');
            let offset: u64 = if let Some(rest) = exp.strip_prefix("16s") {
                symbolic = true;
                if rest.is_empty() {
                    0
                } else {
                    rest.trim_start_matches('+')
                        .parse()
                        .map_err(|_| EnumeratorParseError::Term(raw.clone()))?
                }
            } else {
                exp.parse()
                    .map_err(|_| EnumeratorParseError::Term(raw.clone()))?
            };
            *terms.entry(offset).or_insert(0) += count;
        }
        Ok(Self {
            terms,
            symbolic_base: symbolic.then_some(0),
        })
    }

    /// Re-expresses the exponents relative to `base`, i.e. drops `base` from
    /// every weight. Used to compare concrete enumerators with symbolic ones.
    pub fn relative_to(&self, base: u64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.saturating_sub(base), *c))
                .collect(),
            symbolic_base: Some(0),
        }
    }
}

fn split_terms(text: &str) -> Vec<String> {
    // '+' inside braces belongs to the exponent
    let mut out = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    for c in text.chars() {
        match c {
            '{' => {
                depth += 1;
                cur.push(c);
            }
            '}' => {
                depth -= 1;
                cur.push(c);
            }
            '+' if depth == 0 => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            _ => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

impl fmt::Display for WeightEnumerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_polynomial())
    }
}

pub fn weight_enumerator(l: &DefiningVector) -> WeightEnumerator {
    WeightEnumerator::from_weights(weight_vector(l).weights())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeProfile {
    pub n: u64,
    pub k: usize,
    pub d: u64,
    pub h: usize,
    pub is_lcd: bool,
    pub is_so: bool,
    pub weight_enumerator: WeightEnumerator,
    pub degenerate: bool,
}

impl CodeProfile {
    pub fn of(l: &DefiningVector) -> Self {
        let w = weight_vector(l);
        let h = hull_dimension_of(l);
        Self {
            n: l.length(),
            k: l.k(),
            d: w.min_distance(),
            h,
            is_lcd: h == 0,
            is_so: h == l.k(),
            weight_enumerator: WeightEnumerator::from_weights(w.weights()),
            degenerate: l.is_degenerate(),
        }
    }

    pub fn parameters(&self) -> String {
        format!("[{},{},{}]", self.n, self.k, self.d)
    }
}

/// `sum_{i<k} ceil(d / 2^i)`.
pub fn griesmer_length(k: usize, d: u64) -> u64 {
    (0..k).map(|i| d.div_ceil(1 << i)).sum()
}

/// `d_a(n,5)` for `5 <= n <= 13`, from exhaustive search over defining
/// vectors (see the enumeration tests that regenerate it).
pub const SHORT_OPTIMAL_DISTANCE: [(u64, u64); 9] = [
    (5, 1),
    (6, 2),
    (7, 2),
    (8, 2),
    (9, 3),
    (10, 4),
    (11, 4),
    (12, 4),
    (13, 5),
];

/// `d_a(31s + t, 5) - 16s` for `t = 0..=30`.
pub const DA_OFFSETS: [u64; 31] = [
    0, 0, 0, 0, 0, 1, 2, 2, 3, 4, 4, 4, 5, 6, 6, 7, 8, 8, 8, 8, 9, 10, 10, 11, 12, 12, 12, 13, 14,
    14, 15,
];

/// `d_a(31s + t, 5) - d_l(31s + t, 5)` for `t = 0..=30`, `n >= 14`.
pub const DL_GAPS: [u64; 31] = [
    2, 1, 1, 0, 0, 0, 1, 0, 1, 1, 1, 0, 1, 1, 1, 1, 2, 1, 1, 0, 0, 1, 0, 1, 1, 1, 0, 1, 1, 1, 1,
];

/// Residues whose `d_l` rests on the nonexistence certificates built here.
pub const CERTIFIED_RESIDUES: [u64; 7] = [2, 8, 10, 12, 14, 16, 18];

/// Residues where an optimal LCD code at `d_a` exists by outside constructions.
pub const LCD_OPTIMAL_RESIDUES: [u64; 9] = [3, 4, 5, 7, 11, 19, 20, 22, 26];

pub fn split_length(n: u64) -> (u64, u64) {
    (n / 31, n % 31)
}

/// Largest `d` with `griesmer_length(k, d) <= n`.
pub fn griesmer_max_distance(k: usize, n: u64) -> u64 {
    let mut d = 0;
    while griesmer_length(k, d + 1) <= n {
        d += 1;
    }
    d
}

pub fn d_a(n: u64) -> Option<u64> {
    if n < 5 {
        return None;
    }
    if n >= 14 {
        return Some(griesmer_max_distance(5, n));
    }
    SHORT_OPTIMAL_DISTANCE
        .iter()
        .find(|(len, _)| *len == n)
        .map(|(_, d)| *d)
}

pub fn d_l(n: u64) -> Option<u64> {
    let da = d_a(n)?;
    if n <= 13 {
        return Some(if n == 6 || n == 10 { da - 1 } else { da });
    }
    let (_, t) = split_length(n);
    Some(da - DL_GAPS[t as usize])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundsStatus {
    Griesmer,
    Oracle,
    Cited,
    Verified,
}

impl fmt::Display for BoundsStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundsStatus::Griesmer => "griesmer",
            BoundsStatus::Oracle => "oracle",
            BoundsStatus::Cited => "cited",
            BoundsStatus::Verified => "verified",
        })
    }
}

impl FromStr for BoundsStatus {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "griesmer" => Ok(Self::Griesmer),
            "oracle" => Ok(Self::Oracle),
            "cited" => Ok(Self::Cited),
            "verified" => Ok(Self::Verified),
            other => Err(format!("unknown status {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub n: u64,
    pub s: u64,
    pub t: u64,
    pub d_a: u64,
    pub d_l: u64,
    pub status: BoundsStatus,
}

impl BoundsRow {
    pub fn for_length(n: u64) -> Option<Self> {
        let (s, t) = split_length(n);
        let status = if n <= 13 {
            BoundsStatus::Oracle
        } else if CERTIFIED_RESIDUES.contains(&t) {
            BoundsStatus::Griesmer
        } else {
            BoundsStatus::Cited
        };
        Some(Self {
            n,
            s,
            t,
            d_a: d_a(n)?,
            d_l: d_l(n)?,
            status,
        })
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.n, self.s, self.t, self.d_a, self.d_l, self.status
        )
    }

    pub fn from_csv(line: &str) -> Result<Self, String> {
        let fields: Vec<&str> = line.trim().split(',').collect();
        if fields.len() != 6 {
            return Err(format!("expected 6 fields, got {}", fields.len()));
        }
        let num = |i: usize| -> Result<u64, String> {
            fields[i]
                .parse()
                .map_err(|_| format!("field {i} is not an integer: {:?}", fields[i]))
        };
        Ok(Self {
            n: num(0)?,
            s: num(1)?,
            t: num(2)?,
            d_a: num(3)?,
            d_l: num(4)?,
            status: fields[5].parse()?,
        })
    }
}

pub const BOUNDS_CSV_HEADER: &str = "n,s,t,d_a,d_l,status";

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defining::{build_simplex, generator_from, juxtapose, macdonald_vector};
    use proptest::prelude::*;

    #[test]
    fn hull_examples() {
        let i5 = BitMatrix::identity(5);
        assert_eq!(hull_dimension(&i5), 0);
        assert!(is_lcd(&i5));
        assert!(!is_self_orthogonal(&i5));
        let s5 = build_simplex(5).unwrap();
        assert_eq!(hull_dimension(&s5), 5);
        assert!(!is_lcd(&s5));
        assert!(is_self_orthogonal(&s5));
        let doubled = s5.hstack(&s5).unwrap();
        assert!(is_self_orthogonal(&doubled));
        let i_twice = i5.hstack(&i5).unwrap();
        assert!(is_self_orthogonal(&i_twice));
    }

    #[test]
    fn macdonald_hulls() {
        // juxtaposed simplex copies plus MD(5, m): h = 4, 3, 5 for m = 1, 2, >= 3
        for (m, h) in [(1, 4), (2, 3), (3, 5), (4, 5)] {
            let l = juxtapose(&macdonald_vector(5, m).unwrap(), 2);
            assert_eq!(hull_dimension(&generator_from(&l)), h, "m={m}");
            assert_eq!(hull_dimension_of(&l), h);
        }
    }

    #[test]
    fn enumerator_examples() {
        let ones = DefiningVector::constant(5, 1).unwrap();
        let e = weight_enumerator(&ones);
        assert_eq!(e.terms, BTreeMap::from([(16, 31)]));
        let l11: DefiningVector = "1111101111111112222222222212122".parse().unwrap();
        assert_eq!(
            weight_enumerator(&l11).terms,
            BTreeMap::from([(22, 23), (24, 7), (30, 1)])
        );
        let l21: DefiningVector = "1111101111010112222222222222222".parse().unwrap();
        assert_eq!(
            weight_enumerator(&l21).terms,
            BTreeMap::from([(22, 24), (24, 6), (32, 1)])
        );
    }

    #[test]
    fn polynomial_round_trip() {
        let e =
            WeightEnumerator::parse_polynomial("1+23y^{16s+6}  +7y^{16s+8}+y^{16s+14}").unwrap();
        assert_eq!(e.terms, BTreeMap::from([(6, 23), (8, 7), (14, 1)]));
        assert_eq!(e.to_polynomial(), "1+23y^{16s+6}+7y^{16s+8}+y^{16s+14}");
        let plain = WeightEnumerator::parse_polynomial("1+31y^16").unwrap();
        assert_eq!(plain.terms, BTreeMap::from([(16, 31)]));
        let concrete = WeightEnumerator::from_weights(&[22, 22, 24]).with_symbolic_base(16);
        assert_eq!(concrete.to_polynomial(), "1+2y^{16s+6}+y^{16s+8}");
        assert_eq!(
            WeightEnumerator::from_compact(&concrete.to_compact())
                .unwrap()
                .terms,
            concrete.terms
        );
    }

    #[test]
    fn griesmer_values() {
        assert_eq!(griesmer_length(5, 16), 31);
        assert_eq!(griesmer_length(5, 22), 44);
        assert_eq!(griesmer_length(4, 22), 42);
    }

    #[test]
    fn distance_tables() {
        assert_eq!(d_a(45), Some(22));
        assert_eq!(d_a(47), Some(24));
        assert_eq!(d_a(31), Some(16));
        assert_eq!(d_l(47), Some(22));
        assert_eq!(d_l(41), Some(19));
        assert_eq!(d_l(10), Some(d_a(10).unwrap() - 1));
        assert_eq!(d_a(4), None);
    }

    #[test]
    fn griesmer_matches_residue_table() {
        for n in 14..=256u64 {
            let (s, t) = split_length(n);
            assert_eq!(d_a(n), Some(16 * s + DA_OFFSETS[t as usize]), "n={n}");
        }
    }

    #[test]
    fn gap_structure() {
        for n in 5..=400u64 {
            let gap = d_a(n).unwrap() - d_l(n).unwrap();
            assert!(gap <= 2);
            if n >= 14 {
                let t = n % 31;
                assert_eq!(gap == 2, t == 0 || t == 16, "n={n}");
                assert_eq!(gap == 0, LCD_OPTIMAL_RESIDUES.contains(&t), "n={n}");
            }
        }
    }

    #[test]
    fn bounds_csv() {
        let row = BoundsRow::for_length(47).unwrap();
        assert_eq!(row.to_csv(), "47,1,16,24,22,griesmer");
        assert_eq!(BoundsRow::from_csv(&row.to_csv()).unwrap(), row);
        assert_eq!(
            BoundsRow::for_length(10).unwrap().status,
            BoundsStatus::Oracle
        );
        assert_eq!(
            BoundsRow::for_length(34).unwrap().status,
            BoundsStatus::Cited
        );
        assert!(BoundsRow::from_csv("1,2,3").is_err());
    }

    fn arb_dv(max: u32) -> impl Strategy<Value = DefiningVector> {
        prop::collection::vec(0..=max, 31).prop_map(|e| DefiningVector::new(5, e).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn fast_gram_matches_matrix(l in arb_dv(3)) {
            let g = generator_from(&l);
            prop_assert_eq!(gram_of(&l), g.gram());
            prop_assert_eq!(hull_dimension_of(&l), hull_dimension(&g));
        }

        #[test]
        fn juxtaposition_preserves_hull(l in arb_dv(3), m in 0u32..4) {
            prop_assert_eq!(hull_dimension_of(&juxtapose(&l, m)), hull_dimension_of(&l));
        }

        #[test]
        fn profile_consistency(l in arb_dv(3)) {
            let p = CodeProfile::of(&l);
            prop_assert_eq!(p.is_lcd, p.h == 0);
            prop_assert_eq!(p.is_so, p.h == 5);
            prop_assert_eq!(p.weight_enumerator.total(), 31);
        }
    }
}
