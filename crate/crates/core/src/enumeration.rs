//! Exhaustive search for defining vectors of `[n, k, d]` codes.
//!
//! Entries are assigned in point-table order by depth-first search. Every
//! node keeps the partial weight of each nonzero codeword; a branch dies
//! when some codeword can no longer reach `d` even if all remaining mass
//! lands on its support, when it already exceeds `d + sigma` (no weight can,
//! since the weights sum to `2^(k-1) n`), or when the remaining sum cannot
//! be placed. The tree is cut at a fixed depth into independent subtrees that
//! run in parallel; results are concatenated in prefix order, so the output
//! is lexicographically sorted and identical across runs.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::griesmer_length;
use crate::defining::{
    parity, point_count, sigma, DefiningError, DefiningVector, TypeSignature, MAX_K, MIN_K,
};

const SPLIT_DEPTH: usize = 4;
const NODE_FLUSH: u64 = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SearchSpec {
    pub n: u64,
    pub k: usize,
    pub d: u64,
    pub max_entry: u32,
    pub require_zero_entry: bool,
    /// `true`: minimum weight must equal `d`; `false`: at least `d`.
    pub exact_distance: bool,
}

impl SearchSpec {
    pub fn new(n: u64, k: usize, d: u64, max_entry: u32) -> Self {
        Self {
            n,
            k,
            d,
            max_entry,
            require_zero_entry: false,
            exact_distance: true,
        }
    }

    pub fn with_zero_entry(mut self, required: bool) -> Self {
        self.require_zero_entry = required;
        self
    }

    pub fn with_exact_distance(mut self, exact: bool) -> Self {
        self.exact_distance = exact;
        self
    }

    /// Uses the sound bound from [`entry_bounds`] as `max_entry`.
    pub fn with_sound_bound(n: u64, k: usize, d: u64) -> Self {
        Self::new(n, k, d, entry_bounds(n, k, d))
    }

    pub fn validate(&self) -> Result<(), EnumerationError> {
        if !(MIN_K..=MAX_K).contains(&self.k) {
            return Err(EnumerationError::Defining(
                DefiningError::DimensionOutOfRange(self.k),
            ));
        }
        if self.max_entry == 0 || self.max_entry > u32::from(u8::MAX) {
            return Err(EnumerationError::InvalidSpec(format!(
                "max_entry {} must be in 1..=255",
                self.max_entry
            )));
        }
        if self.n < self.d {
            return Err(EnumerationError::InvalidSpec(format!(
                "length {} below distance {}",
                self.n, self.d
            )));
        }
        Ok(())
    }
}

impl fmt::Display for SearchSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} k={} d={} max_entry={} require_zero_entry={} exact_distance={}",
            self.n, self.k, self.d, self.max_entry, self.require_zero_entry, self.exact_distance
        )
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_time: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn nodes(limit: u64) -> Self {
        Self {
            max_nodes: Some(limit),
            max_time: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum EnumerationError {
    #[error(transparent)]
    Defining(#[from] DefiningError),
    #[error("invalid search spec: {0}")]
    InvalidSpec(String),
    #[error("search budget exhausted after {nodes} nodes ({elapsed:?}); {} partial solutions kept", partial.total())]
    BudgetExceeded {
        nodes: u64,
        elapsed: Duration,
        partial: Box<SolutionSet>,
    },
}

/// Solutions stored as packed byte rows of length `2^k - 1`, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionSet {
    pub spec: SearchSpec,
    width: usize,
    data: Vec<u8>,
    pub by_type: BTreeMap<TypeSignature, u64>,
    pub nodes: u64,
}

impl SolutionSet {
    fn from_rows(spec: SearchSpec, data: Vec<u8>, nodes: u64) -> Self {
        let width = point_count(spec.k);
        let mut set = Self {
            spec,
            width,
            data,
            by_type: BTreeMap::new(),
            nodes,
        };
        set.by_type = count_types(&set);
        set
    }

    pub fn total(&self) -> u64 {
        if self.width == 0 {
            0
        } else {
            (self.data.len() / self.width) as u64
        }
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn row(&self, index: usize) -> &[u8] {
        &self.data[index * self.width..(index + 1) * self.width]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[u8]> + '_ {
        self.data.chunks_exact(self.width.max(1))
    }

    pub fn get(&self, index: usize) -> DefiningVector {
        row_to_vector(self.spec.k, self.row(index))
    }

    pub fn iter(&self) -> impl Iterator<Item = DefiningVector> + '_ {
        self.rows().map(move |r| row_to_vector(self.spec.k, r))
    }

    /// Index of a row by binary search.
    pub fn position(&self, row: &[u8]) -> Option<usize> {
        let total = self.total() as usize;
        let (mut lo, mut hi) = (0usize, total);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.row(mid).cmp(row) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn contains(&self, l: &DefiningVector) -> bool {
        l.k() == self.spec.k && vector_to_row(l).is_some_and(|r| self.position(&r).is_some())
    }

    pub fn is_strictly_sorted(&self) -> bool {
        let total = self.total() as usize;
        (1..total).all(|i| self.row(i - 1) < self.row(i))
    }

    /// Line-oriented text: `#` header lines with the spec and totals, then
    /// one digit-string vector per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# spec {}\n", self.spec));
        out.push_str(&format!("# total {}\n", self.total()));
        for (sig, count) in &self.by_type {
            out.push_str(&format!("# type {sig} {count}\n"));
        }
        for l in self.iter() {
            out.push_str(&l.to_text());
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, EnumerationError> {
        let mut spec = None;
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("# spec ") {
                spec = Some(parse_spec(rest)?);
            } else if line.starts_with('#') {
                continue;
            } else {
                let spec = spec.ok_or_else(|| {
                    EnumerationError::InvalidSpec("vector before spec header".into())
                })?;
                let l = DefiningVector::parse_with_k(line, spec.k)?;
                rows.extend(vector_to_row(&l).ok_or_else(|| {
                    EnumerationError::InvalidSpec(format!("entry above 255 in {line}"))
                })?);
            }
        }
        let spec =
            spec.ok_or_else(|| EnumerationError::InvalidSpec("missing spec header".into()))?;
        Ok(Self::from_rows(spec, rows, 0))
    }
}

fn parse_spec(text: &str) -> Result<SearchSpec, EnumerationError> {
    let mut fields = BTreeMap::new();
    for part in text.split_whitespace() {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| EnumerationError::InvalidSpec(format!("bad spec field {part:?}")))?;
        fields.insert(key, value);
    }
    let get = |key: &str| -> Result<&str, EnumerationError> {
        fields
            .get(key)
            .copied()
            .ok_or_else(|| EnumerationError::InvalidSpec(format!("missing spec field {key}")))
    };
    let num = |key: &str| -> Result<u64, EnumerationError> {
        get(key)?
            .parse()
            .map_err(|_| EnumerationError::InvalidSpec(format!("bad value for {key}")))
    };
    let flag = |key: &str| -> Result<bool, EnumerationError> {
        get(key)?
            .parse()
            .map_err(|_| EnumerationError::InvalidSpec(format!("bad value for {key}")))
    };
    Ok(SearchSpec {
        n: num("n")?,
        k: num("k")? as usize,
        d: num("d")?,
        max_entry: num("max_entry")? as u32,
        require_zero_entry: flag("require_zero_entry")?,
        exact_distance: flag("exact_distance")?,
    })
}

pub(crate) fn row_to_vector(k: usize, row: &[u8]) -> DefiningVector {
    DefiningVector::new(k, row.iter().map(|&v| u32::from(v)).collect())
        .expect("row width matches k")
}

pub(crate) fn vector_to_row(l: &DefiningVector) -> Option<Vec<u8>> {
    l.entries().iter().map(|&v| u8::try_from(v).ok()).collect()
}

fn count_types(set: &SolutionSet) -> BTreeMap<TypeSignature, u64> {
    let mut out = BTreeMap::new();
    for l in set.iter() {
        *out.entry(TypeSignature::of(&l)).or_insert(0) += 1;
    }
    out
}

pub fn count_by_type(set: &SolutionSet) -> BTreeMap<TypeSignature, u64> {
    set.by_type.clone()
}

/// Sound upper bound on any entry: reducing at a point of multiplicity `l_p`
/// leaves an `[n - l_p, k - 1, >= d]` code, so `l_p <= n - g(k - 1, d)`.
/// Floored at 1 so that Griesmer-tight lengths keep the simplex.
pub fn entry_bounds(n: u64, k: usize, d: u64) -> u32 {
    let reduced = griesmer_length(k - 1, d);
    n.saturating_sub(reduced).max(1) as u32
}

/// Lower bound on every entry: summing the weights of the `2^(k-1)` codewords
/// that are nonzero on a point `p` gives `2^(k-2) (n + l_p) >= 2^(k-1) d`.
pub fn entry_lower_bound(n: u64, d: u64) -> u32 {
    (2 * d).saturating_sub(n) as u32
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("degenerate code: generator rank {rank} < {k}")]
    Degenerate { rank: usize, k: usize },
}

/// Minimum distance by brute force over all nonzero messages of the
/// explicit generator matrix.
pub fn oracle_min_distance(l: &DefiningVector) -> Result<u64, OracleError> {
    let g = crate::defining::generator_from(l);
    let rank = g.rank();
    if rank < l.k() {
        return Err(OracleError::Degenerate { rank, k: l.k() });
    }
    Ok((1..(1u64 << l.k()))
        .map(|m| g.codeword_weight(m) as u64)
        .min()
        .unwrap_or(0))
}

struct Tables {
    width: usize,
    /// point filled at each depth; descending, so that codewords close early
    order: Vec<usize>,
    /// codewords incident to the point filled at each depth
    incident: Vec<Vec<u16>>,
    /// `remaining[depth * width + u]`: unfilled points incident to `u`
    remaining: Vec<u32>,
    /// proper subspaces of codimension >= 2 through the point at each depth
    through: Vec<Vec<u32>>,
    /// codimension and size of each subspace
    codim: Vec<(usize, u64)>,
}

/// Point sets of all subspaces of codimension `c`, as kernels of
/// `c`-dimensional subspaces of the dual.
fn subspaces_of_codim(k: usize, c: usize) -> Vec<Vec<usize>> {
    let width = point_count(k);
    let mut seen = std::collections::BTreeSet::new();
    let mut duals: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..c {
        let mut next = Vec::new();
        for span in &duals {
            for u in 1..=width as u32 {
                if span.contains(&u) {
                    continue;
                }
                let mut grown = span.clone();
                for &x in span {
                    grown.push(x ^ u);
                }
                grown.push(u);
                grown.sort_unstable();
                if seen.insert(grown.clone()) {
                    next.push(grown);
                }
            }
        }
        duals = next;
    }
    duals
        .iter()
        .map(|span| {
            (0..width)
                .filter(|&p| span.iter().all(|&u| parity(u & (p as u32 + 1)) == 0))
                .collect()
        })
        .collect()
}

/// Subspace constraints are skipped above this dimension; their number grows
/// too fast to pay for themselves.
const SUBSPACE_MAX_K: usize = 6;

impl Tables {
    fn new(k: usize) -> Self {
        let width = point_count(k);
        let order: Vec<usize> = (0..width).collect();
        let incident: Vec<Vec<u16>> = order
            .iter()
            .map(|&p| {
                (0..width)
                    .filter(|&u| parity((u as u32 + 1) & (p as u32 + 1)) == 1)
                    .map(|u| u as u16)
                    .collect()
            })
            .collect();
        let mut remaining = vec![0u32; (width + 1) * width];
        for depth in (0..width).rev() {
            for u in 0..width {
                remaining[depth * width + u] = remaining[(depth + 1) * width + u];
            }
            for &u in &incident[depth] {
                remaining[depth * width + u as usize] += 1;
            }
        }
        let mut through = vec![Vec::new(); width];
        let mut codim = Vec::new();
        if k <= SUBSPACE_MAX_K {
            let depth_of: Vec<usize> = {
                let mut d = vec![0; width];
                for (depth, &p) in order.iter().enumerate() {
                    d[p] = depth;
                }
                d
            };
            for c in 2..k {
                for points in subspaces_of_codim(k, c) {
                    let id = codim.len() as u32;
                    codim.push((c, points.len() as u64));
                    for p in points {
                        through[depth_of[p]].push(id);
                    }
                }
            }
        }
        Self {
            width,
            order,
            incident,
            remaining,
            through,
            codim,
        }
    }
}

struct Shared<'a> {
    spec: SearchSpec,
    tables: &'a Tables,
    ceiling: u64,
    /// largest allowed sum on each subspace: `n - g(c, d)`
    caps: Vec<u64>,
    /// binding subspaces through the point at each depth
    through: Vec<Vec<u32>>,
    nodes: AtomicU64,
    aborted: AtomicBool,
    budget: Budget,
    flush: u64,
    start: Instant,
}

impl Shared<'_> {
    fn charge(&self, local: &mut u64) -> bool {
        *local += 1;
        if *local < self.flush {
            return !self.aborted.load(Ordering::Relaxed);
        }
        let total = self.nodes.fetch_add(*local, Ordering::Relaxed) + *local;
        *local = 0;
        let over_nodes = self.budget.max_nodes.is_some_and(|m| total > m);
        let over_time = self
            .budget
            .max_time
            .is_some_and(|t| self.start.elapsed() > t);
        if over_nodes || over_time {
            self.aborted.store(true, Ordering::Relaxed);
        }
        !self.aborted.load(Ordering::Relaxed)
    }
}

struct Walker<'a, 'b> {
    shared: &'b Shared<'a>,
    weights: Vec<u64>,
    sums: Vec<u64>,
    /// values by depth
    values: Vec<u8>,
    local_nodes: u64,
    out: Vec<u8>,
}

impl<'a, 'b> Walker<'a, 'b> {
    fn new(shared: &'b Shared<'a>) -> Self {
        let width = shared.tables.width;
        Self {
            shared,
            weights: vec![0; width],
            sums: vec![0; shared.caps.len()],
            values: vec![0; width],
            local_nodes: 0,
            out: Vec::new(),
        }
    }

    /// Assigns a fixed start; the remaining mass if it is still feasible.
    fn start(&mut self, fixed: &[u8]) -> Option<u64> {
        let mut remaining = self.shared.spec.n;
        let mut ok = true;
        for (depth, &v) in fixed.iter().enumerate() {
            ok &= self.assign(depth, v);
            remaining = remaining.checked_sub(u64::from(v))?;
        }
        (ok && self.feasible(fixed.len(), remaining)).then_some(remaining)
    }

    /// Returns `false` when some subspace through the point overflows.
    fn assign(&mut self, depth: usize, v: u8) -> bool {
        self.values[depth] = v;
        let tables = self.shared.tables;
        for &u in &tables.incident[depth] {
            self.weights[u as usize] += u64::from(v);
        }
        let mut ok = true;
        for &id in &self.shared.through[depth] {
            let sum = &mut self.sums[id as usize];
            *sum += u64::from(v);
            ok &= *sum <= self.shared.caps[id as usize];
        }
        ok
    }

    fn unassign(&mut self, depth: usize) {
        let v = self.values[depth];
        let tables = self.shared.tables;
        for &u in &tables.incident[depth] {
            self.weights[u as usize] -= u64::from(v);
        }
        for &id in &self.shared.through[depth] {
            self.sums[id as usize] -= u64::from(v);
        }
        self.values[depth] = 0;
    }

    /// Can the state after filling `depth` points with `remaining` mass left
    /// still complete?
    fn feasible(&self, depth: usize, remaining: u64) -> bool {
        let spec = &self.shared.spec;
        let tables = self.shared.tables;
        let width = tables.width;
        if remaining > u64::from(spec.max_entry) * (width - depth) as u64 {
            return false;
        }
        let rem = &tables.remaining[depth * width..(depth + 1) * width];
        let cap = u64::from(spec.max_entry);
        for (&w, &r) in self.weights.iter().zip(rem) {
            if w > self.shared.ceiling || w + (cap * u64::from(r)).min(remaining) < spec.d {
                return false;
            }
        }
        true
    }

    fn accept(&mut self) {
        let spec = &self.shared.spec;
        if spec.require_zero_entry && !self.values.contains(&0) {
            return;
        }
        if spec.exact_distance && !self.weights.contains(&spec.d) {
            return;
        }
        let start = self.out.len();
        self.out.resize(start + self.values.len(), 0);
        for (depth, &p) in self.shared.tables.order.iter().enumerate() {
            self.out[start + p] = self.values[depth];
        }
    }

    fn descend(&mut self, depth: usize, remaining: u64) {
        if !self.shared.charge(&mut self.local_nodes) {
            return;
        }
        let width = self.shared.tables.width;
        if depth == width {
            if remaining == 0 {
                self.accept();
            }
            return;
        }
        let top = u64::from(self.shared.spec.max_entry).min(remaining);
        for v in 0..=top {
            if self.assign(depth, v as u8) && self.feasible(depth + 1, remaining - v) {
                self.descend(depth + 1, remaining - v);
            }
            self.unassign(depth);
        }
    }
}

/// Feasible assignments of depths `fixed.len()..depth` below a fixed start.
fn prefixes(shared: &Shared<'_>, fixed: &[u8], depth: usize) -> Vec<Vec<u8>> {
    fn rec(
        w: &mut Walker<'_, '_>,
        at: usize,
        depth: usize,
        remaining: u64,
        out: &mut Vec<Vec<u8>>,
    ) {
        if at == depth {
            out.push(w.values[..depth].to_vec());
            return;
        }
        let top = u64::from(w.shared.spec.max_entry).min(remaining);
        for v in 0..=top {
            if w.assign(at, v as u8) && w.feasible(at + 1, remaining - v) {
                rec(w, at + 1, depth, remaining - v, out);
            }
            w.unassign(at);
        }
    }
    let mut out = Vec::new();
    let mut walker = Walker::new(shared);
    let Some(remaining) = walker.start(fixed) else {
        return out;
    };
    rec(&mut walker, fixed.len(), depth, remaining, &mut out);
    out
}

fn sort_rows(data: Vec<u8>, width: usize) -> Vec<u8> {
    let mut rows: Vec<&[u8]> = data.chunks_exact(width).collect();
    rows.par_sort_unstable();
    rows.concat()
}

/// Every defining vector with entries in `0..=max_entry`, sum `n`, and
/// minimum weight `d` (or at least `d`), in lexicographic order.
pub fn enumerate_defining_vectors(spec: &SearchSpec) -> Result<SolutionSet, EnumerationError> {
    enumerate_with_budget(spec, Budget::unlimited())
}

pub fn enumerate_with_budget(
    spec: &SearchSpec,
    budget: Budget,
) -> Result<SolutionSet, EnumerationError> {
    complete_prefix(spec, &[], budget)
}

/// Like [`enumerate_with_budget`], restricted to vectors whose first entries
/// (in point order) equal `fixed`.
pub fn complete_prefix(
    spec: &SearchSpec,
    fixed: &[u8],
    budget: Budget,
) -> Result<SolutionSet, EnumerationError> {
    spec.validate()?;
    let tables = Tables::new(spec.k);
    let width = tables.width;
    if fixed.len() > width || fixed.iter().any(|&v| u32::from(v) > spec.max_entry) {
        return Err(EnumerationError::InvalidSpec(format!(
            "fixed prefix {fixed:?} does not fit the spec"
        )));
    }
    let sig = sigma(spec.n, spec.k, spec.d);
    if sig < 0 {
        return Ok(SolutionSet::from_rows(*spec, Vec::new(), 0));
    }
    let caps: Vec<u64> = tables
        .codim
        .iter()
        .map(|&(c, _)| spec.n.saturating_sub(griesmer_length(c, spec.d)))
        .collect();
    let binding: Vec<bool> = tables
        .codim
        .iter()
        .zip(&caps)
        .map(|(&(_, size), &cap)| cap < size * u64::from(spec.max_entry))
        .collect();
    let through = tables
        .through
        .iter()
        .map(|ids| {
            ids.iter()
                .copied()
                .filter(|&id| binding[id as usize])
                .collect()
        })
        .collect();
    let shared = Shared {
        spec: *spec,
        tables: &tables,
        ceiling: spec.d + sig as u64,
        caps,
        through,
        nodes: AtomicU64::new(0),
        aborted: AtomicBool::new(false),
        budget,
        flush: budget
            .max_nodes
            .map_or(NODE_FLUSH, |m| m.clamp(1, NODE_FLUSH)),
        start: Instant::now(),
    };
    let split = (fixed.len() + SPLIT_DEPTH).min(width);
    let roots = prefixes(&shared, fixed, split);
    let chunks: Vec<Vec<u8>> = roots
        .par_iter()
        .map(|prefix| {
            let mut walker = Walker::new(&shared);
            let remaining = walker.start(prefix).expect("prefix was feasible");
            walker.descend(split, remaining);
            shared
                .nodes
                .fetch_add(walker.local_nodes, Ordering::Relaxed);
            walker.out
        })
        .collect();
    let nodes = shared.nodes.load(Ordering::Relaxed);
    let data = sort_rows(chunks.concat(), width);
    let set = SolutionSet::from_rows(*spec, data, nodes);
    if shared.aborted.load(Ordering::Relaxed) || budget.max_nodes.is_some_and(|m| nodes > m) {
        return Err(EnumerationError::BudgetExceeded {
            nodes,
            elapsed: shared.start.elapsed(),
            partial: Box::new(set),
        });
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::defining::{generator_from, weight_vector};

    /// Plain recursion over all vectors with entries `<= max` summing to `n`,
    /// filtered by the brute-force generator-matrix distance.
    fn naive(spec: &SearchSpec) -> Vec<DefiningVector> {
        fn rec(
            spec: &SearchSpec,
            entries: &mut Vec<u32>,
            remaining: u64,
            out: &mut Vec<DefiningVector>,
        ) {
            let width = point_count(spec.k);
            if entries.len() == width {
                if remaining != 0 {
                    return;
                }
                let l = DefiningVector::new(spec.k, entries.clone()).unwrap();
                if spec.require_zero_entry && !entries.contains(&0) {
                    return;
                }
                let g = generator_from(&l);
                let d = (1..(1u64 << spec.k))
                    .map(|m| g.codeword_weight(m) as u64)
                    .min()
                    .unwrap();
                let ok = if spec.exact_distance {
                    d == spec.d
                } else {
                    d >= spec.d
                };
                if ok {
                    out.push(l);
                }
                return;
            }
            for v in 0..=u64::from(spec.max_entry).min(remaining) {
                entries.push(v as u32);
                rec(spec, entries, remaining - v, out);
                entries.pop();
            }
        }
        let mut out = Vec::new();
        rec(spec, &mut Vec::new(), spec.n, &mut out);
        out
    }

    #[test]
    fn matches_naive_for_small_dimensions() {
        for (n, k, d, max) in [
            (7, 3, 4, 1),
            (8, 3, 4, 2),
            (10, 3, 5, 2),
            (9, 3, 4, 3),
            (12, 4, 6, 1),
            (16, 4, 8, 2),
        ] {
            for exact in [true, false] {
                for zero in [true, false] {
                    let spec = SearchSpec::new(n, k, d, max)
                        .with_exact_distance(exact)
                        .with_zero_entry(zero);
                    let fast: Vec<_> = enumerate_defining_vectors(&spec).unwrap().iter().collect();
                    assert_eq!(fast, naive(&spec), "{spec}");
                }
            }
        }
    }

    #[test]
    fn simplex_is_unique() {
        let spec = SearchSpec::new(31, 5, 16, 1);
        let set = enumerate_defining_vectors(&spec).unwrap();
        assert_eq!(set.total(), 1);
        assert_eq!(set.get(0), DefiningVector::constant(5, 1).unwrap());
    }

    #[test]
    fn no_13_5_6_code() {
        let spec = SearchSpec::with_sound_bound(13, 5, 6);
        assert_eq!(enumerate_defining_vectors(&spec).unwrap().total(), 0);
        let loose = spec.with_exact_distance(false);
        assert_eq!(enumerate_defining_vectors(&loose).unwrap().total(), 0);
    }

    #[test]
    fn short_optimal_distances_regenerate() {
        use crate::analysis::{d_a, d_l};
        use crate::equivalence::classify_by_residuals;
        for n in 5..=13 {
            let (da, dl) = (d_a(n).unwrap(), d_l(n).unwrap());
            let spec = SearchSpec::with_sound_bound(n, 5, dl).with_exact_distance(false);
            let classes = classify_by_residuals(&spec, Budget::unlimited())
                .unwrap()
                .classes;
            let best = classes.iter().map(|c| c.profile.d).max();
            assert_eq!(best, Some(da), "n={n}");
            let best_lcd = classes
                .iter()
                .filter(|c| c.profile.is_lcd)
                .map(|c| c.profile.d)
                .max();
            assert_eq!(best_lcd, Some(dl), "n={n}");
        }
    }

    #[test]
    fn entry_bound_examples() {
        assert_eq!(entry_bounds(44, 5, 22), 2);
        assert_eq!(entry_bounds(72, 5, 36), 4);
        assert_eq!(entry_bounds(31, 5, 16), 1);
        assert_eq!(entry_lower_bound(45, 22), 0);
        assert_eq!(entry_lower_bound(31 * 2 + 14, 16 * 2 + 6), 0);
        assert_eq!(entry_lower_bound(31 * 3 + 14, 16 * 3 + 6), 1);
    }

    #[test]
    fn oracle_distance() {
        assert_eq!(
            oracle_min_distance(&DefiningVector::constant(5, 1).unwrap()),
            Ok(16)
        );
        let mut e = vec![0; 31];
        e[0] = 3;
        assert!(matches!(
            oracle_min_distance(&DefiningVector::new(5, e).unwrap()),
            Err(OracleError::Degenerate { rank: 1, .. })
        ));
        let l: DefiningVector = "2212121201212112211111121111112".parse().unwrap();
        assert_eq!(
            oracle_min_distance(&l),
            Ok(weight_vector(&l).min_distance())
        );
    }

    #[test]
    fn superset_when_not_exact() {
        let spec = SearchSpec::new(15, 4, 7, 2);
        let exact = enumerate_defining_vectors(&spec).unwrap();
        let loose = enumerate_defining_vectors(&spec.with_exact_distance(false)).unwrap();
        assert!(loose.total() > exact.total());
        assert!(exact.iter().all(|l| loose.contains(&l)));
    }

    #[test]
    fn budget_abort_keeps_partial() {
        let spec = SearchSpec::new(44, 5, 22, 2).with_zero_entry(true);
        match enumerate_with_budget(&spec, Budget::nodes(10_000)) {
            Err(EnumerationError::BudgetExceeded { nodes, partial, .. }) => {
                assert!(nodes > 10_000);
                assert!(partial.total() < 4805);
                assert!(partial.is_strictly_sorted());
            }
            other => panic!("expected abort, got {other:?}"),
        }
    }

    #[test]
    fn text_round_trip() {
        let spec = SearchSpec::new(16, 4, 8, 2);
        let set = enumerate_defining_vectors(&spec).unwrap();
        let back = SolutionSet::from_text(&set.to_text()).unwrap();
        assert_eq!(back.spec, set.spec);
        assert_eq!(
            back.iter().collect::<Vec<_>>(),
            set.iter().collect::<Vec<_>>()
        );
        assert_eq!(back.by_type, set.by_type);
        assert!(SolutionSet::from_text("1111").is_err());
    }

    #[test]
    fn prefix_completion_is_a_slice() {
        let spec = SearchSpec::new(16, 4, 8, 2);
        let all = enumerate_defining_vectors(&spec).unwrap();
        for prefix in [vec![0u8, 1, 1], vec![2, 2], vec![1; 7]] {
            let part = complete_prefix(&spec, &prefix, Budget::unlimited()).unwrap();
            let expected: Vec<_> = all
                .rows()
                .filter(|r| r.starts_with(&prefix))
                .map(|r| r.to_vec())
                .collect();
            assert_eq!(
                part.rows().map(|r| r.to_vec()).collect::<Vec<_>>(),
                expected
            );
        }
        assert!(complete_prefix(&spec, &[3], Budget::unlimited()).is_err());
    }

    #[test]
    fn invalid_specs() {
        assert!(enumerate_defining_vectors(&SearchSpec::new(10, 5, 11, 1)).is_err());
        assert!(enumerate_defining_vectors(&SearchSpec::new(10, 5, 4, 0)).is_err());
        assert!(enumerate_defining_vectors(&SearchSpec::new(10, 9, 4, 1)).is_err());
    }
}
