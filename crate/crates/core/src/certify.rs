//! Certificates that no LCD code exists among `[n, 5, >= d]` codes, and a
//! seeded search for LCD codes one step below.
//!
//! With `n = 31s + t` and `m = ceil(n / 31)`, every defining vector has
//! `l_max >= m`. The family is split by `l_max` and `l_min`:
//!
//! * `l_max = u > m`: reducing at a point of multiplicity `u` leaves an
//!   `[n - u, 4, >= d]` code `D`. With `G = [[1..1, x], [0, G_D]]` the Gram
//!   matrix of `C` contains that of `D` as a block, bordered by one row and
//!   one column, so `h(C) >= h(D) - 1`.
//! * `l_max = m`, `l_min = v`: `L = v * 1 + L'` where `L'` describes an
//!   `[n - 31v, 5, >= d - 16v]` code with entries `<= m - v` and a zero entry.
//!   The simplex code is self-orthogonal, so `h(C) = h(L')`; these strata are
//!   classified exhaustively.
//!
//! For odd `d`, codes of minimum distance exactly `d` extend by a parity
//! column to `[n + 1, 5, d + 1]` codes. The extension adds a rank-one term to
//! the Gram matrix, so `h(C) >= h(C_ext) - 1`. The remaining codes have
//! minimum distance `>= d + 1` and are certified separately.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{griesmer_length, hull_dimension_of, split_length};
use crate::defining::{parity, DefiningVector};
use crate::enumeration::{
    entry_bounds, entry_lower_bound, oracle_min_distance, Budget, EnumerationError, SearchSpec,
};
use crate::equivalence::{classify_by_residuals, ClassifyError, EquivalenceClass};
use crate::tables::{compare_classes, instance_for_spec, Fixtures};

pub const K: usize = 5;
const POINTS: usize = 31;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Enumerate,
    ReduceArgument,
    ExtensionArgument,
    /// the family is empty because `n` is below the Griesmer length
    GriesmerBound,
    Cited,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Enumerate => "enumerate",
            Method::ReduceArgument => "reduce-argument",
            Method::ExtensionArgument => "extension-argument",
            Method::GriesmerBound => "griesmer-bound",
            Method::Cited => "cited",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub representative: String,
    pub h: usize,
    pub weight_enumerator: String,
    pub member_count: u64,
    pub orbit_size: u64,
}

impl From<&EquivalenceClass> for ClassSummary {
    fn from(c: &EquivalenceClass) -> Self {
        Self {
            representative: c.representative.to_text(),
            h: c.profile.h,
            weight_enumerator: c.profile.weight_enumerator.to_compact(),
            member_count: c.member_count,
            orbit_size: c.orbit_size,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    pub description: String,
    pub method: Method,
    pub l_max: Option<u64>,
    pub l_min: Option<u64>,
    /// enumerated family: the normalized `L'` for `enumerate`, the reduced
    /// four-dimensional code for `reduce-argument`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalized_spec: Option<SearchSpec>,
    /// lower bound on `h` over the stratum; `None` when the stratum is empty
    /// or not yet resolved
    pub min_h: Option<usize>,
    pub classes: Vec<ClassSummary>,
    pub complete: bool,
    pub justification: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub substrata: Vec<Stratum>,
}

impl Stratum {
    fn pending(description: String, method: Method) -> Self {
        Self {
            description,
            method,
            l_max: None,
            l_min: None,
            normalized_spec: None,
            min_h: None,
            classes: Vec::new(),
            complete: false,
            justification: String::new(),
            substrata: Vec::new(),
        }
    }

    /// No code falls into this stratum, or every code has `h >= 1`.
    pub fn excludes_lcd(&self) -> bool {
        self.complete && self.min_h.map_or(true, |h| h >= 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub d: u64,
    pub defining_vector: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub n: u64,
    pub k: usize,
    pub d: u64,
    pub s: u64,
    pub t: u64,
    pub strata: Vec<Stratum>,
    /// lower bound on `h` over all `[n, 5, >= d]` codes (exact when every
    /// stratum was enumerated); `None` when the family is empty
    pub min_h: Option<usize>,
    pub lcd_nonexistent: bool,
    pub complete: bool,
    pub witness: Option<Witness>,
    pub paper_diffs: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Every stratum, depth first.
    pub fn all_strata(&self) -> Vec<&Stratum> {
        fn walk<'a>(s: &'a Stratum, out: &mut Vec<&'a Stratum>) {
            out.push(s);
            for sub in &s.substrata {
                walk(sub, out);
            }
        }
        let mut out = Vec::new();
        for s in &self.strata {
            walk(s, &mut out);
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!(
            "## [{}, {}, >= {}] codes (s = {}, t = {})\n\n",
            self.n, self.k, self.d, self.s, self.t
        );
        out.push_str(&format!(
            "min h: {} | LCD code exists: {} | complete: {}\n\n",
            self.min_h
                .map_or("none (empty family)".into(), |h| h.to_string()),
            if self.lcd_nonexistent {
                "no"
            } else {
                "not excluded"
            },
            self.complete
        ));
        out.push_str("| stratum | method | min h | classes |\n|---|---|---|---|\n");
        for s in self.all_strata() {
            out.push_str(&format!(
                "| {} | {} | {} | {} |\n",
                s.description,
                s.method,
                s.min_h.map_or("-".into(), |h| h.to_string()),
                s.classes.len()
            ));
        }
        if let Some(w) = &self.witness {
            out.push_str(&format!(
                "\nLCD witness at d = {}: {}\n",
                w.d, w.defining_vector
            ));
        }
        for note in &self.notes {
            out.push_str(&format!("\n- {note}"));
        }
        if !self.paper_diffs.is_empty() {
            out.push_str("\n\n### Differences from the printed tables\n\n");
            for d in &self.paper_diffs {
                out.push_str(&format!("- {d}\n"));
            }
        }
        out
    }
}

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error("s = {s} does not match n = {n} (expected {})", n / 31)]
    SplitMismatch { n: u64, s: u64 },
    #[error("extension argument needs odd d, got {0}")]
    EvenDistance(u64),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WitnessLimits {
    pub restarts: u32,
    pub steps: u32,
}

impl Default for WitnessLimits {
    fn default() -> Self {
        Self {
            restarts: 64,
            steps: 1500,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CertifyOptions {
    pub budget: Budget,
    /// search for an LCD `[n, 5, >= d - 1]` code with this seed
    pub witness_seed: Option<u64>,
    pub witness_limits: WitnessLimits,
    /// also enumerate the `l_max > m` strata that the reduction settles
    pub cross_check_reductions: bool,
}

fn level(x: u64, s: u64) -> String {
    match x.cmp(&s) {
        std::cmp::Ordering::Greater => format!("s+{}", x - s),
        std::cmp::Ordering::Equal => "s".into(),
        std::cmp::Ordering::Less => format!("s-{}", s - x),
    }
}

fn normalized_spec(n: u64, d: u64, v: u64, top: u64) -> SearchSpec {
    SearchSpec::new(
        n - 31 * v,
        K,
        d.saturating_sub(16 * v),
        (top - v).max(1) as u32,
    )
    .with_zero_entry(true)
    .with_exact_distance(false)
}

fn enumerate_stratum(n: u64, d: u64, s: u64, v: u64, top: u64) -> Stratum {
    let spec = normalized_spec(n, d, v, top);
    let mut st = Stratum::pending(
        format!(
            "l_max <= {}, l_min = {}: L = ({})*1 + L', L' in [{},5,>={}] with entries <= {}",
            level(top, s),
            level(v, s),
            level(v, s),
            spec.n,
            spec.d,
            spec.max_entry
        ),
        Method::Enumerate,
    );
    st.l_max = Some(top);
    st.l_min = Some(v);
    st.normalized_spec = Some(spec);
    st
}

/// Splits `[n, 5, >= d]` codes into the strata described in the module docs.
/// Strata come back unresolved. An empty list means the family is empty.
pub fn case_split(n: u64, d: u64, s: u64) -> Result<Vec<Stratum>, CertifyError> {
    if s != n / 31 {
        return Err(CertifyError::SplitMismatch { n, s });
    }
    if griesmer_length(K, d) > n {
        return Ok(Vec::new());
    }
    let m = n.div_ceil(31);
    let low = u64::from(entry_lower_bound(n, d));
    let high = u64::from(entry_bounds(n, K, d));
    let mut strata = Vec::new();
    for u in (m + 1..=high).rev() {
        let mut st = Stratum::pending(
            format!(
                "l_max = {}: reduced code [{},4,>={}]",
                level(u, s),
                n - u,
                d
            ),
            Method::ReduceArgument,
        );
        st.l_max = Some(u);
        st.normalized_spec =
            Some(SearchSpec::with_sound_bound(n - u, K - 1, d).with_exact_distance(false));
        strata.push(st);
    }
    let last = if n == 31 * m { m } else { m - 1 };
    for v in low..=last {
        strata.push(enumerate_stratum(n, d, s, v, m));
    }
    Ok(strata)
}

fn run_classification(
    spec: &SearchSpec,
    budget: Budget,
) -> Result<Option<Vec<EquivalenceClass>>, CertifyError> {
    if spec.n < spec.d || griesmer_length(spec.k, spec.d) > spec.n {
        return Ok(Some(Vec::new()));
    }
    match classify_by_residuals(spec, budget) {
        Ok(r) => Ok(Some(r.classes)),
        Err(ClassifyError::Enumeration(EnumerationError::BudgetExceeded { .. })) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

struct Resolution {
    classes: Vec<EquivalenceClass>,
}

fn resolve_enumeration(
    st: &mut Stratum,
    budget: Budget,
) -> Result<Option<Resolution>, CertifyError> {
    let spec = st
        .normalized_spec
        .expect("enumeration stratum carries its spec");
    match run_classification(&spec, budget)? {
        None => {
            st.complete = false;
            st.justification = "search budget exhausted".into();
            Ok(None)
        }
        Some(classes) => {
            st.complete = true;
            st.min_h = classes.iter().map(|c| c.profile.h).min();
            st.classes = classes.iter().map(ClassSummary::from).collect();
            st.justification = match st.min_h {
                None => "no defining vector exists".into(),
                Some(h) => format!(
                    "{} inequivalent codes ({} labeled vectors), minimum h = {h}",
                    classes.len(),
                    classes.iter().map(|c| c.orbit_size).sum::<u64>()
                ),
            };
            Ok(Some(Resolution { classes }))
        }
    }
}

/// Settles an `l_max = u` stratum through its reduced `[n - u, 4, >= d]`
/// family. When that family has `h <= 1` somewhere, the stratum is
/// enumerated instead (one substratum per `l_min`).
pub fn certify_via_reduction(
    stratum: &Stratum,
    n: u64,
    d: u64,
    options: &CertifyOptions,
) -> Result<Stratum, CertifyError> {
    let mut st = stratum.clone();
    let u = st.l_max.expect("reduction stratum carries l_max");
    let spec = st
        .normalized_spec
        .expect("reduction stratum carries its spec");
    match run_classification(&spec, options.budget)? {
        None => {
            st.complete = false;
            st.justification = "search budget exhausted on the reduced family".into();
        }
        Some(classes) => {
            let r = classes.iter().map(|c| c.profile.h).min();
            st.classes = classes.iter().map(ClassSummary::from).collect();
            match r {
                None => {
                    st.complete = true;
                    st.min_h = None;
                    st.justification = format!("no [{},4,>={d}] code exists", n - u);
                }
                Some(r) if r >= 2 => {
                    st.complete = true;
                    st.min_h = Some(r - 1);
                    st.justification = format!(
                        "every [{},4,>={d}] code has h >= {r}, so h(C) >= {}",
                        n - u,
                        r - 1
                    );
                }
                Some(r) => {
                    st.justification =
                        format!("reduced family reaches h = {r}; stratum enumerated directly");
                    st.method = Method::Enumerate;
                    let s = n / 31;
                    let low = u64::from(entry_lower_bound(n, d));
                    st.substrata.clear();
                    for v in low..u {
                        let mut sub = enumerate_stratum(n, d, s, v, u);
                        resolve_enumeration(&mut sub, options.budget)?;
                        st.substrata.push(sub);
                    }
                    st.complete = st.substrata.iter().all(|x| x.complete);
                    st.min_h = st.substrata.iter().filter_map(|x| x.min_h).min();
                }
            }
        }
    }
    if options.cross_check_reductions && st.method == Method::ReduceArgument && st.complete {
        let s = n / 31;
        let low = u64::from(entry_lower_bound(n, d));
        for v in low..u {
            let mut sub = enumerate_stratum(n, d, s, v, u);
            resolve_enumeration(&mut sub, options.budget)?;
            sub.description = format!("cross-check: {}", sub.description);
            st.substrata.push(sub);
        }
    }
    Ok(st)
}

/// Bounds `h` for codes of odd minimum distance exactly `d` through their
/// parity extensions.
pub fn certify_via_extension(
    n: u64,
    d: u64,
    options: &CertifyOptions,
) -> Result<Stratum, CertifyError> {
    if d % 2 == 0 {
        return Err(CertifyError::EvenDistance(d));
    }
    let inner = CertifyOptions {
        witness_seed: None,
        ..*options
    };
    let extended = certify_no_lcd(n + 1, d + 1, &inner)?;
    let mut st = Stratum::pending(
        format!(
            "minimum distance exactly {d}: parity extension is an [{},5,{}] code",
            n + 1,
            d + 1
        ),
        Method::ExtensionArgument,
    );
    st.complete = extended.complete;
    st.min_h = extended.min_h.map(|h| h.saturating_sub(1));
    st.justification = match extended.min_h {
        None => format!("no [{},5,>={}] code exists", n + 1, d + 1),
        Some(h) => format!("every [{},5,>={}] code has h >= {h}", n + 1, d + 1),
    };
    st.substrata = extended.strata;
    Ok(st)
}

fn table_diffs(classes: &[EquivalenceClass], spec: &SearchSpec, s: u64) -> Vec<String> {
    let Some(instance) = instance_for_spec(spec) else {
        return Vec::new();
    };
    let fixtures = Fixtures::builtin();
    let total = classes.iter().map(|c| c.orbit_size).sum();
    let report = compare_classes(instance, s, classes, total, &fixtures);
    report
        .errata
        .iter()
        .map(|e| match e.row {
            Some(r) => format!("table {} row {r}: {}", instance.id, e.detail),
            None => format!("table {}: {}", instance.id, e.detail),
        })
        .collect()
}

fn resolve_all(
    strata: Vec<Stratum>,
    n: u64,
    d: u64,
    s: u64,
    options: &CertifyOptions,
    diffs: &mut Vec<String>,
) -> Result<Vec<Stratum>, CertifyError> {
    let mut out = Vec::with_capacity(strata.len());
    for st in strata {
        match st.method {
            Method::ReduceArgument => out.push(certify_via_reduction(&st, n, d, options)?),
            _ => {
                let mut st = st;
                if let Some(res) = resolve_enumeration(&mut st, options.budget)? {
                    let spec = st.normalized_spec.expect("spec set");
                    diffs.extend(table_diffs(&res.classes, &spec, s));
                }
                out.push(st);
            }
        }
    }
    Ok(out)
}

/// Certifies (or fails to certify) that no `[n, 5, >= d]` code is LCD.
pub fn certify_no_lcd(
    n: u64,
    d: u64,
    options: &CertifyOptions,
) -> Result<Certificate, CertifyError> {
    let (s, t) = split_length(n);
    let mut cert = Certificate {
        n,
        k: K,
        d,
        s,
        t,
        strata: Vec::new(),
        min_h: None,
        lcd_nonexistent: false,
        complete: true,
        witness: None,
        paper_diffs: Vec::new(),
        notes: Vec::new(),
    };
    let g = griesmer_length(K, d);
    if g > n {
        let mut st = Stratum::pending(format!("all [{n},5,>={d}] codes"), Method::GriesmerBound);
        st.complete = true;
        st.justification = format!("Griesmer length g(5,{d}) = {g} exceeds {n}");
        cert.strata.push(st);
    } else {
        let mut direct = true;
        if d % 2 == 1 {
            let ext = certify_via_extension(n, d, options)?;
            if ext.excludes_lcd() {
                let higher = certify_no_lcd(
                    n,
                    d + 1,
                    &CertifyOptions {
                        witness_seed: None,
                        ..*options
                    },
                )?;
                let mut rest = Stratum::pending(
                    format!("minimum distance >= {}", d + 1),
                    if higher.strata.len() == 1 && higher.strata[0].method == Method::GriesmerBound
                    {
                        Method::GriesmerBound
                    } else {
                        Method::Cited
                    },
                );
                rest.complete = higher.complete;
                rest.min_h = higher.min_h;
                rest.justification = format!("certificate for [{n},5,>={}]", d + 1);
                rest.substrata = higher.strata;
                cert.paper_diffs.extend(higher.paper_diffs);
                cert.strata = vec![ext, rest];
                direct = false;
            } else {
                cert.notes.push(format!(
                    "extension bound inconclusive (h >= {:?}); enumerating directly",
                    ext.min_h
                ));
            }
        }
        if direct {
            let split = case_split(n, d, s)?;
            cert.strata = resolve_all(split, n, d, s, options, &mut cert.paper_diffs)?;
        }
    }
    cert.complete = cert.strata.iter().all(|st| st.complete);
    cert.min_h = cert.strata.iter().filter_map(|st| st.min_h).min();
    cert.lcd_nonexistent = cert.complete && cert.min_h.map_or(true, |h| h >= 1);
    if let Some(seed) = options.witness_seed {
        if d >= 2 {
            cert.witness =
                search_lcd_witness(n, d - 1, seed, options.witness_limits).map(|l| Witness {
                    d: d - 1,
                    defining_vector: l.to_text(),
                });
        }
    }
    cert.paper_diffs.sort();
    cert.paper_diffs.dedup();
    Ok(cert)
}

/// `s * 1` plus `t` extra units, on the unit points first.
pub fn seed_vector(n: u64) -> DefiningVector {
    let (s, t) = split_length(n);
    let mut entries = vec![s as u32; POINTS];
    let units = [0usize, 1, 3, 7, 15];
    let order = units
        .iter()
        .copied()
        .chain((0..POINTS).filter(|p| !units.contains(p)));
    for p in order.take(t as usize) {
        entries[p] += 1;
    }
    DefiningVector::new(K, entries).expect("31 entries")
}

/// Both the independent distance oracle and the Gram test must agree.
pub fn validate_witness(l: &DefiningVector, d: u64, require_lcd: bool) -> bool {
    l.k() == K
        && oracle_min_distance(l).is_ok_and(|dist| dist >= d)
        && (!require_lcd || hull_dimension_of(l) == 0)
}

/// Seeded local search for an `[n, 5, >= d]` code, LCD when `require_lcd`.
///
/// Moves shift one column from one point to another; the objective is the
/// total shortfall `sum_u max(0, d - w_u)`.
pub fn search_code(
    n: u64,
    d: u64,
    require_lcd: bool,
    seed: u64,
    limits: WitnessLimits,
) -> Option<DefiningVector> {
    if n == 0 || griesmer_length(K, d) > n {
        return None;
    }
    let incident: Vec<[bool; POINTS]> = (1..=POINTS as u32)
        .map(|u| {
            let mut row = [false; POINTS];
            for (p, slot) in row.iter_mut().enumerate() {
                *slot = parity(u & (p as u32 + 1)) == 1;
            }
            row
        })
        .collect();
    let d = d as i64;
    let shortfall = |w: i64| (d - w).max(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for restart in 0..limits.restarts.max(1) {
        let mut l: Vec<u32> = seed_vector(n).into_entries();
        if restart > 0 {
            for _ in 0..(4 + n / 4) {
                let a = rng.gen_range(0..POINTS);
                if l[a] > 0 {
                    l[a] -= 1;
                    l[rng.gen_range(0..POINTS)] += 1;
                }
            }
        }
        let mut w: Vec<i64> = incident
            .iter()
            .map(|row| {
                (0..POINTS)
                    .filter(|&p| row[p])
                    .map(|p| i64::from(l[p]))
                    .sum()
            })
            .collect();
        for _ in 0..limits.steps {
            let deficit: i64 = w.iter().map(|&x| shortfall(x)).sum();
            if deficit == 0 {
                let candidate = DefiningVector::new(K, l.clone()).expect("31 entries");
                if validate_witness(&candidate, d as u64, require_lcd) {
                    return Some(candidate);
                }
            }
            let mut best = i64::MAX;
            let mut choice = (0, 0);
            let mut ties = 0u32;
            for a in (0..POINTS).filter(|&a| l[a] > 0) {
                for b in (0..POINTS).filter(|&b| b != a) {
                    let mut delta = 0;
                    for (u, row) in incident.iter().enumerate() {
                        if row[a] != row[b] {
                            let moved = w[u] - i64::from(row[a]) + i64::from(row[b]);
                            delta += shortfall(moved) - shortfall(w[u]);
                        }
                    }
                    if delta < best {
                        best = delta;
                        choice = (a, b);
                        ties = 1;
                    } else if delta == best {
                        ties += 1;
                        if rng.gen_range(0..ties) == 0 {
                            choice = (a, b);
                        }
                    }
                }
            }
            // plateaus and non-LCD optima are left by a random move
            if best >= 0 && rng.gen_bool(0.3) {
                let a = loop {
                    let a = rng.gen_range(0..POINTS);
                    if l[a] > 0 {
                        break a;
                    }
                };
                let b = (a + rng.gen_range(1..POINTS)) % POINTS;
                choice = (a, b);
            }
            let (a, b) = choice;
            l[a] -= 1;
            l[b] += 1;
            for (u, row) in incident.iter().enumerate() {
                w[u] += i64::from(row[b]) - i64::from(row[a]);
            }
        }
    }
    None
}

pub fn search_lcd_witness(
    n: u64,
    d: u64,
    seed: u64,
    limits: WitnessLimits,
) -> Option<DefiningVector> {
    search_code(n, d, true, seed, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{d_a, d_l};

    #[test]
    fn reduction_loses_at_most_one_hull_dimension() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut checked = 0;
        while checked < 100 {
            let entries: Vec<u32> = (0..POINTS).map(|_| rng.gen_range(0..=3)).collect();
            let l = DefiningVector::new(K, entries).unwrap();
            let point = rng.gen_range(0..POINTS);
            let (_, reduced) = crate::defining::reduce_at_point(&l, point).unwrap();
            let r = hull_dimension_of(&reduced);
            if r < 2 {
                continue;
            }
            assert!(hull_dimension_of(&l) + 1 >= r, "{l} at point {point}");
            checked += 1;
        }
    }

    #[test]
    fn seed_vector_shape() {
        assert_eq!(seed_vector(36).to_text(), "2212111211111112111111111111111");
        let l = seed_vector(31 * 2 + 7);
        assert_eq!(l.length(), 69);
        assert_eq!(seed_vector(5).to_text(), "1101000100000001000000000000000");
    }

    #[test]
    fn case_split_shapes() {
        // [48,5,>=24]: l_max = s+2 reduces to [45,4,24]; l_max = s+1 splits by l_min
        let strata = case_split(48, 24, 1).unwrap();
        let methods: Vec<Method> = strata.iter().map(|s| s.method).collect();
        assert_eq!(
            methods,
            [Method::ReduceArgument, Method::Enumerate, Method::Enumerate]
        );
        assert_eq!(strata[0].normalized_spec.unwrap().n, 45);
        assert_eq!(strata[1].normalized_spec.unwrap().n, 48);
        assert_eq!(strata[2].normalized_spec.unwrap().n, 17);
        assert!(case_split(13, 6, 0).unwrap().is_empty() == false);
        assert!(case_split(12, 6, 0).unwrap().is_empty());
        assert!(matches!(
            case_split(48, 24, 2),
            Err(CertifyError::SplitMismatch { .. })
        ));
    }

    #[test]
    fn small_certificates_match_brute_force() {
        use crate::enumeration::enumerate_defining_vectors;
        // direct minimum of h over every labeled [n,5,>=d] vector
        for (n, d) in [
            (8u64, 3u64),
            (9, 4),
            (10, 4),
            (12, 5),
            (13, 6),
            (15, 7),
            (16, 8),
            (20, 9),
        ] {
            let spec = SearchSpec::with_sound_bound(n, K, d).with_exact_distance(false);
            let set = enumerate_defining_vectors(&spec).unwrap();
            let brute = set
                .iter()
                .filter(|l| !l.is_degenerate())
                .map(|l| hull_dimension_of(&l))
                .min();
            let cert = certify_no_lcd(n, d, &CertifyOptions::default()).unwrap();
            assert!(cert.complete);
            match (brute, cert.min_h) {
                (Some(b), Some(c)) => assert!(c <= b, "n={n} d={d}: bound {c} above true min {b}"),
                (None, c) => assert_eq!(c, None, "n={n} d={d}"),
                (Some(b), None) => panic!("n={n} d={d}: certificate missed codes (true min {b})"),
            }
            assert_eq!(
                cert.lcd_nonexistent,
                brute.map_or(true, |b| b >= 1),
                "n={n} d={d}"
            );
        }
    }

    #[test]
    fn extension_requires_odd_distance() {
        assert!(matches!(
            certify_via_extension(40, 20, &CertifyOptions::default()),
            Err(CertifyError::EvenDistance(20))
        ));
    }

    #[test]
    fn witnesses_at_d_l_for_short_lengths() {
        for n in 14..=30 {
            let dl = d_l(n).unwrap();
            let l = search_lcd_witness(n, dl, 7, WitnessLimits::default())
                .unwrap_or_else(|| panic!("no LCD witness for n={n} d={dl}"));
            assert!(validate_witness(&l, dl, true));
            assert_eq!(l.length(), n);
        }
        assert!(search_code(
            20,
            d_a(20).unwrap() + 1,
            false,
            1,
            WitnessLimits {
                restarts: 2,
                steps: 50
            }
        )
        .is_none());
    }

    #[test]
    fn certificate_json_round_trip() {
        let cert = certify_no_lcd(13, 6, &CertifyOptions::default()).unwrap();
        let text = cert.to_json();
        assert_eq!(Certificate::from_json(&text).unwrap(), cert);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        for key in [
            "n",
            "k",
            "d",
            "s",
            "t",
            "strata",
            "min_h",
            "lcd_nonexistent",
            "witness",
            "paper_diffs",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
    }
}
