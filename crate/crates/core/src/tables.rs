//! Printed classification tables: fixture loading and recomputation.
//!
//! Each classification table lists inequivalent normalized defining vectors
//! `L'` (so that `L = (s - c) * 1 + L'`) with the hull dimension and weight
//! enumerator of the corresponding length-`31s + t` code. Exponents are
//! written as `16s + offset`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{d_a, d_l, split_length, WeightEnumerator};
use crate::defining::{DefiningVector, TypeSignature};
use crate::enumeration::{Budget, SearchSpec};
use crate::equivalence::{canonical_form, classify_by_residuals, ClassifyError, EquivalenceClass};

pub const BUILTIN_TABLES: &str = include_str!("../fixtures/tables.csv");
pub const BUILTIN_TABLE_TYPES: &str = include_str!("../fixtures/table_types.csv");
pub const BUILTIN_TABLE1: &str = include_str!("../fixtures/table1.csv");

pub const TABLES_FILE: &str = "tables.csv";
pub const TABLE_TYPES_FILE: &str = "table_types.csv";
pub const TABLE1_FILE: &str = "table1.csv";

const TABLES_HEADER: &str = "table,row,defining_vector,h,weight_enumerator";
const TABLE_TYPES_HEADER: &str = "table,group,type_signature,rows";
const TABLE1_HEADER: &str = "t,d_a,d_l";

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("cannot read fixture {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{file}: expected header {expected:?}")]
    Header { file: String, expected: String },
    #[error("{file}:{line}: {message}")]
    Format {
        file: String,
        line: usize,
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureRow {
    pub table: String,
    pub row: usize,
    /// verbatim, including any printing defects
    pub defining_vector: String,
    pub h: usize,
    pub weight_enumerator: String,
}

/// A "Type of defining vector" header and the number of rows printed under it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureTypeGroup {
    pub table: String,
    pub group: usize,
    pub type_signature: String,
    pub rows: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsFormula {
    pub t: u64,
    pub d_a: String,
    pub d_l: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixtures {
    pub rows: Vec<FixtureRow>,
    pub groups: Vec<FixtureTypeGroup>,
    pub bounds: Vec<BoundsFormula>,
}

fn records<'a>(
    file: &str,
    text: &'a str,
    header: &str,
    fields: usize,
) -> Result<Vec<(usize, Vec<&'a str>)>, FixtureError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, first)) if first.trim() == header => {}
        _ => {
            return Err(FixtureError::Header {
                file: file.into(),
                expected: header.into(),
            })
        }
    }
    lines
        .map(|(i, line)| {
            let parts: Vec<&str> = line.split(',').map(str::trim).collect();
            if parts.len() != fields {
                return Err(FixtureError::Format {
                    file: file.into(),
                    line: i + 1,
                    message: format!("expected {fields} fields, got {}", parts.len()),
                });
            }
            Ok((i + 1, parts))
        })
        .collect()
}

fn number<T: std::str::FromStr>(file: &str, line: usize, field: &str) -> Result<T, FixtureError> {
    field.parse().map_err(|_| FixtureError::Format {
        file: file.into(),
        line,
        message: format!("{field:?} is not a number"),
    })
}

impl Fixtures {
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_TABLES, BUILTIN_TABLE_TYPES, BUILTIN_TABLE1)
            .expect("embedded fixtures are well formed")
    }

    /// Reads `tables.csv`, `table_types.csv` and `table1.csv` from `dir`.
    pub fn from_dir(dir: &Path) -> Result<Self, FixtureError> {
        let read = |name: &str| {
            let path = dir.join(name);
            std::fs::read_to_string(&path).map_err(|source| FixtureError::Io { path, source })
        };
        Self::parse(
            &read(TABLES_FILE)?,
            &read(TABLE_TYPES_FILE)?,
            &read(TABLE1_FILE)?,
        )
    }

    pub fn parse(tables: &str, types: &str, table1: &str) -> Result<Self, FixtureError> {
        let rows = records(TABLES_FILE, tables, TABLES_HEADER, 5)?
            .into_iter()
            .map(|(line, f)| {
                Ok(FixtureRow {
                    table: f[0].into(),
                    row: number(TABLES_FILE, line, f[1])?,
                    defining_vector: f[2].into(),
                    h: number(TABLES_FILE, line, f[3])?,
                    weight_enumerator: f[4].into(),
                })
            })
            .collect::<Result<Vec<_>, FixtureError>>()?;
        let groups = records(TABLE_TYPES_FILE, types, TABLE_TYPES_HEADER, 4)?
            .into_iter()
            .map(|(line, f)| {
                Ok(FixtureTypeGroup {
                    table: f[0].into(),
                    group: number(TABLE_TYPES_FILE, line, f[1])?,
                    type_signature: f[2].into(),
                    rows: number(TABLE_TYPES_FILE, line, f[3])?,
                })
            })
            .collect::<Result<Vec<_>, FixtureError>>()?;
        let bounds = records(TABLE1_FILE, table1, TABLE1_HEADER, 3)?
            .into_iter()
            .map(|(line, f)| {
                for formula in [f[1], f[2]] {
                    if parse_offset(formula).is_none() {
                        return Err(FixtureError::Format {
                            file: TABLE1_FILE.into(),
                            line,
                            message: format!("bad formula {formula:?}"),
                        });
                    }
                }
                Ok(BoundsFormula {
                    t: number(TABLE1_FILE, line, f[0])?,
                    d_a: f[1].into(),
                    d_l: f[2].into(),
                })
            })
            .collect::<Result<Vec<_>, FixtureError>>()?;
        Ok(Self {
            rows,
            groups,
            bounds,
        })
    }

    pub fn rows_of(&self, table: &str) -> Vec<&FixtureRow> {
        self.rows.iter().filter(|r| r.table == table).collect()
    }

    pub fn groups_of(&self, table: &str) -> Vec<&FixtureTypeGroup> {
        self.groups.iter().filter(|g| g.table == table).collect()
    }
}

/// `16s+3` -> 3, `16s-2` -> -2, `16s` -> 0.
pub fn parse_offset(formula: &str) -> Option<i64> {
    let rest = formula.trim().strip_prefix("16s")?;
    if rest.is_empty() {
        return Some(0);
    }
    if let Some(v) = rest.strip_prefix('+') {
        v.parse().ok()
    } else {
        rest.strip_prefix('-')?.parse::<i64>().ok().map(|v| -v)
    }
}

/// Normalized instance behind a classification table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TableInstance {
    pub id: &'static str,
    pub n: u64,
    pub d: u64,
    pub max_entry: u32,
    /// simplex copies removed: `L = (s - copies) * 1 + L'`
    pub copies: u64,
    pub t: u64,
    /// class count stated in the caption or text
    pub caption_count: usize,
}

impl TableInstance {
    pub fn spec(&self) -> SearchSpec {
        SearchSpec::new(self.n, 5, self.d, self.max_entry).with_zero_entry(true)
    }

    pub fn label(&self) -> String {
        format!("[{},5,{}]", self.n, self.d)
    }
}

pub const TABLE_INSTANCES: [TableInstance; 8] = [
    TableInstance {
        id: "2",
        n: 41,
        d: 20,
        max_entry: 2,
        copies: 1,
        t: 10,
        caption_count: 19,
    },
    TableInstance {
        id: "3",
        n: 72,
        d: 36,
        max_entry: 3,
        copies: 2,
        t: 10,
        caption_count: 13,
    },
    TableInstance {
        id: "4",
        n: 45,
        d: 22,
        max_entry: 2,
        copies: 1,
        t: 14,
        caption_count: 21,
    },
    TableInstance {
        id: "5",
        n: 76,
        d: 38,
        max_entry: 3,
        copies: 2,
        t: 14,
        caption_count: 10,
    },
    TableInstance {
        id: "6",
        n: 49,
        d: 24,
        max_entry: 2,
        copies: 1,
        t: 18,
        caption_count: 15,
    },
    TableInstance {
        id: "7",
        n: 80,
        d: 40,
        max_entry: 3,
        copies: 2,
        t: 18,
        caption_count: 7,
    },
    TableInstance {
        id: "t13",
        n: 44,
        d: 22,
        max_entry: 2,
        copies: 1,
        t: 13,
        caption_count: 2,
    },
    TableInstance {
        id: "t17",
        n: 48,
        d: 24,
        max_entry: 2,
        copies: 1,
        t: 17,
        caption_count: 4,
    },
];

pub fn table_instance(id: &str) -> Option<&'static TableInstance> {
    TABLE_INSTANCES.iter().find(|t| t.id == id)
}

/// Instance whose solutions are exactly those of `spec`, if any.
pub fn instance_for_spec(spec: &SearchSpec) -> Option<&'static TableInstance> {
    TABLE_INSTANCES.iter().find(|t| {
        spec.k == 5
            && spec.n == t.n
            && spec.d == t.d
            && spec.max_entry == t.max_entry
            && spec.require_zero_entry
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErratumKind {
    MalformedVector,
    NotASolution,
    DuplicateClass,
    HullMismatch,
    EnumeratorMismatch,
    EnumeratorSum,
    TypeMismatch,
    UnlistedClass,
    MissingType,
    CountMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Erratum {
    pub row: Option<usize>,
    pub kind: ErratumKind,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowCheck {
    pub row: usize,
    pub printed_vector: String,
    pub printed_h: usize,
    pub printed_enumerator: String,
    /// 1-based index into the report's classes
    pub class: Option<usize>,
    pub computed_h: Option<usize>,
    pub computed_enumerator: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportedClass {
    pub index: usize,
    pub type_signature: String,
    pub representative: String,
    pub h: usize,
    /// symbolic, `16s + offset`
    pub weight_enumerator: String,
    /// concrete weights at the requested `s`, when `s >= copies`
    pub weight_enumerator_at_s: Option<String>,
    pub orbit_size: u64,
    pub stabilizer_order: u64,
    /// classes sharing type, `h` and enumerator get the same profile id
    pub profile: usize,
    pub listed_rows: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeGroupCheck {
    pub group: usize,
    pub type_signature: String,
    pub printed_rows: usize,
    pub classes: usize,
    pub profiles: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassTableReport {
    pub table: String,
    pub s: u64,
    pub instance: String,
    pub t: u64,
    pub caption_count: usize,
    pub class_count: usize,
    pub profile_count: usize,
    pub labeled_total: u64,
    pub classes: Vec<ReportedClass>,
    pub rows: Vec<RowCheck>,
    pub groups: Vec<TypeGroupCheck>,
    pub errata: Vec<Erratum>,
}

impl ClassTableReport {
    pub fn caption_matches(&self) -> bool {
        self.class_count == self.caption_count
    }

    pub fn unlisted(&self) -> impl Iterator<Item = &ReportedClass> {
        self.classes.iter().filter(|c| c.listed_rows.is_empty())
    }

    pub fn min_h(&self) -> Option<usize> {
        self.classes.iter().map(|c| c.h).min()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsCheck {
    pub n: u64,
    pub t: u64,
    pub printed_d_a: u64,
    pub printed_d_l: u64,
    pub d_a: u64,
    pub d_l: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub s: u64,
    pub rows: Vec<BoundsCheck>,
    pub errata: Vec<Erratum>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Reproduction {
    Bounds(BoundsReport),
    Classes(ClassTableReport),
}

impl Reproduction {
    /// A caption-level disagreement; per-row defects are reported, not fatal.
    pub fn is_fatal(&self) -> bool {
        match self {
            Reproduction::Bounds(b) => !b.errata.is_empty(),
            Reproduction::Classes(c) => !c.caption_matches(),
        }
    }

    pub fn errata(&self) -> &[Erratum] {
        match self {
            Reproduction::Bounds(b) => &b.errata,
            Reproduction::Classes(c) => &c.errata,
        }
    }

    pub fn to_markdown(&self) -> String {
        match self {
            Reproduction::Bounds(b) => bounds_markdown(b),
            Reproduction::Classes(c) => classes_markdown(c),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match self {
            Reproduction::Bounds(b) => {
                out.push_str("n,t,d_a,d_l,printed_d_a,printed_d_l\n");
                for r in &b.rows {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{}",
                        r.n, r.t, r.d_a, r.d_l, r.printed_d_a, r.printed_d_l
                    );
                }
            }
            Reproduction::Classes(c) => {
                out.push_str(
                    "class_id,type,representative,h,weight_enumerator,orbit_size,stabilizer_order,profile,rows\n",
                );
                for class in &c.classes {
                    let rows: Vec<String> =
                        class.listed_rows.iter().map(usize::to_string).collect();
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{},{},{},{}",
                        class.index,
                        class.type_signature,
                        class.representative,
                        class.h,
                        class.weight_enumerator,
                        class.orbit_size,
                        class.stabilizer_order,
                        class.profile,
                        rows.join(" ")
                    );
                }
            }
        }
        out
    }
}

#[derive(Debug, Error)]
pub enum ReproduceError {
    #[error("unknown table {0:?}; expected 1-7, t13 or t17")]
    UnknownTable(String),
    #[error(transparent)]
    Fixture(#[from] FixtureError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

pub fn reproduce_table(
    id: &str,
    s: u64,
    fixtures: &Fixtures,
    budget: Budget,
) -> Result<Reproduction, ReproduceError> {
    if id == "1" {
        return Ok(Reproduction::Bounds(reproduce_bounds(s, fixtures)));
    }
    let instance = table_instance(id).ok_or_else(|| ReproduceError::UnknownTable(id.into()))?;
    let classified = classify_by_residuals(&instance.spec(), budget)?;
    Ok(Reproduction::Classes(compare_classes(
        instance,
        s,
        &classified.classes,
        classified.labeled_total(),
        fixtures,
    )))
}

/// Rows of Table 1 for `n = 31s + t >= 14`, printed formulas against the
/// Griesmer-derived `d_a` and the `d_l` gaps.
pub fn reproduce_bounds(s: u64, fixtures: &Fixtures) -> BoundsReport {
    let mut rows = Vec::new();
    let mut errata = Vec::new();
    for formula in &fixtures.bounds {
        let n = 31 * s + formula.t;
        if n < 14 {
            continue;
        }
        let base = 16 * s as i64;
        let printed_d_a = base + parse_offset(&formula.d_a).unwrap_or(i64::MIN / 2);
        let printed_d_l = base + parse_offset(&formula.d_l).unwrap_or(i64::MIN / 2);
        let (Some(da), Some(dl)) = (d_a(n), d_l(n)) else {
            continue;
        };
        if printed_d_a != da as i64 || printed_d_l != dl as i64 {
            errata.push(Erratum {
                row: Some(formula.t as usize),
                kind: ErratumKind::CountMismatch,
                detail: format!(
                    "n={n}: printed (d_a, d_l) = ({printed_d_a}, {printed_d_l}), computed ({da}, {dl})"
                ),
            });
        }
        rows.push(BoundsCheck {
            n,
            t: split_length(n).1,
            printed_d_a: printed_d_a.max(0) as u64,
            printed_d_l: printed_d_l.max(0) as u64,
            d_a: da,
            d_l: dl,
        });
    }
    BoundsReport { s, rows, errata }
}

/// Strict parse, then a lenient one that drops stray parentheses.
fn parse_printed(text: &str) -> (Option<DefiningVector>, Option<String>) {
    if let Ok(l) = DefiningVector::parse(text) {
        return (Some(l), None);
    }
    let cleaned: String = text.chars().filter(|c| *c != '(' && *c != ')').collect();
    match DefiningVector::parse(&cleaned) {
        Ok(l) => (Some(l), Some(format!("unbalanced parentheses in {text:?}"))),
        Err(e) => (None, Some(format!("{text:?}: {e}"))),
    }
}

pub fn compare_classes(
    instance: &TableInstance,
    s: u64,
    classes: &[EquivalenceClass],
    labeled_total: u64,
    fixtures: &Fixtures,
) -> ClassTableReport {
    let base = 16 * instance.copies;
    let index: HashMap<&DefiningVector, usize> = classes
        .iter()
        .enumerate()
        .map(|(i, c)| (&c.representative, i))
        .collect();
    let symbolic = |c: &EquivalenceClass| c.profile.weight_enumerator.relative_to(base);

    let mut profiles: BTreeMap<(TypeSignature, usize, String), usize> = BTreeMap::new();
    let mut profile_of = Vec::with_capacity(classes.len());
    for c in classes {
        let key = (
            c.type_signature.clone(),
            c.profile.h,
            symbolic(c).to_compact(),
        );
        let next = profiles.len() + 1;
        profile_of.push(*profiles.entry(key).or_insert(next));
    }

    let mut errata = Vec::new();
    let mut rows = Vec::new();
    let mut listed: Vec<Vec<usize>> = vec![Vec::new(); classes.len()];
    let mut row_types: Vec<Option<TypeSignature>> = Vec::new();
    let mut duplicates = BTreeSet::new();
    for fixture in fixtures.rows_of(instance.id) {
        let row = fixture.row;
        let (parsed, defect) = parse_printed(&fixture.defining_vector);
        if let Some(detail) = defect {
            errata.push(Erratum {
                row: Some(row),
                kind: ErratumKind::MalformedVector,
                detail,
            });
        }
        let printed = WeightEnumerator::parse_polynomial(&fixture.weight_enumerator).ok();
        match &printed {
            Some(p) if p.total() != 31 => errata.push(Erratum {
                row: Some(row),
                kind: ErratumKind::EnumeratorSum,
                detail: format!(
                    "printed enumerator {} has {} nonzero codewords, not 31",
                    fixture.weight_enumerator,
                    p.total()
                ),
            }),
            None => errata.push(Erratum {
                row: Some(row),
                kind: ErratumKind::EnumeratorMismatch,
                detail: format!("unreadable enumerator {:?}", fixture.weight_enumerator),
            }),
            _ => {}
        }
        let mut check = RowCheck {
            row,
            printed_vector: fixture.defining_vector.clone(),
            printed_h: fixture.h,
            printed_enumerator: fixture.weight_enumerator.clone(),
            class: None,
            computed_h: None,
            computed_enumerator: None,
        };
        row_types.push(parsed.as_ref().map(TypeSignature::of));
        if let Some(l) = parsed.filter(|l| l.k() == 5) {
            let class = index.get(&canonical_form(&l)).copied();
            match class {
                None => errata.push(Erratum {
                    row: Some(row),
                    kind: ErratumKind::NotASolution,
                    detail: format!("{} is not a solution of {}", l, instance.spec()),
                }),
                Some(i) => {
                    let c = &classes[i];
                    let computed = symbolic(c);
                    check.class = Some(i + 1);
                    check.computed_h = Some(c.profile.h);
                    check.computed_enumerator = Some(computed.to_polynomial());
                    if let Some(&first) = listed[i].first() {
                        duplicates.insert(row);
                        errata.push(Erratum {
                            row: Some(row),
                            kind: ErratumKind::DuplicateClass,
                            detail: format!("same class as row {first} (class {})", i + 1),
                        });
                    }
                    listed[i].push(row);
                    if c.profile.h != fixture.h {
                        errata.push(Erratum {
                            row: Some(row),
                            kind: ErratumKind::HullMismatch,
                            detail: format!("printed h={}, computed h={}", fixture.h, c.profile.h),
                        });
                    }
                    if let Some(p) = &printed {
                        if p.terms != computed.terms {
                            errata.push(Erratum {
                                row: Some(row),
                                kind: ErratumKind::EnumeratorMismatch,
                                detail: format!(
                                    "printed {}, computed {}",
                                    fixture.weight_enumerator,
                                    computed.to_polynomial()
                                ),
                            });
                        }
                    }
                }
            }
        }
        rows.push(check);
    }

    let mut header_of: Vec<Option<TypeSignature>> = vec![None; rows.len()];
    let mut groups = Vec::new();
    let mut cursor = 0;
    let mut headed: BTreeSet<TypeSignature> = BTreeSet::new();
    for g in fixtures.groups_of(instance.id) {
        let sig: Option<TypeSignature> = g.type_signature.parse().ok();
        for slot in header_of.iter_mut().skip(cursor).take(g.rows) {
            *slot = sig.clone();
        }
        for (offset, ty) in row_types.iter().enumerate().skip(cursor).take(g.rows) {
            if let (Some(sig), Some(ty)) = (&sig, ty) {
                if sig != ty {
                    errata.push(Erratum {
                        row: Some(rows[offset].row),
                        kind: ErratumKind::TypeMismatch,
                        detail: format!("listed under {sig}, vector has type {ty}"),
                    });
                }
            }
        }
        cursor += g.rows;
        let (count, profile_count) = match &sig {
            Some(sig) => {
                headed.insert(sig.clone());
                let members: Vec<usize> = (0..classes.len())
                    .filter(|&i| &classes[i].type_signature == sig)
                    .collect();
                let distinct: BTreeSet<usize> = members.iter().map(|&i| profile_of[i]).collect();
                (members.len(), distinct.len())
            }
            None => (0, 0),
        };
        if count != g.rows {
            errata.push(Erratum {
                row: None,
                kind: ErratumKind::CountMismatch,
                detail: format!(
                    "type {}: {} rows printed, {} inequivalent classes ({} distinct (h, enumerator) profiles)",
                    g.type_signature, g.rows, count, profile_count
                ),
            });
        }
        groups.push(TypeGroupCheck {
            group: g.group,
            type_signature: g.type_signature.clone(),
            printed_rows: g.rows,
            classes: count,
            profiles: profile_count,
        });
    }
    let mut missing: BTreeMap<&TypeSignature, usize> = BTreeMap::new();
    for c in classes
        .iter()
        .filter(|c| !headed.contains(&c.type_signature))
    {
        *missing.entry(&c.type_signature).or_insert(0) += 1;
    }
    for (sig, count) in missing {
        errata.push(Erratum {
            row: None,
            kind: ErratumKind::MissingType,
            detail: format!("type {sig} has {count} classes but no table section"),
        });
    }

    let reported: Vec<ReportedClass> = classes
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let concrete = (s >= instance.copies).then(|| {
                c.profile
                    .weight_enumerator
                    .shifted(16 * (s - instance.copies))
                    .to_compact()
            });
            ReportedClass {
                index: i + 1,
                type_signature: c.type_signature.to_string(),
                representative: c.representative.to_text(),
                h: c.profile.h,
                weight_enumerator: symbolic(c).to_polynomial(),
                weight_enumerator_at_s: concrete,
                orbit_size: c.orbit_size,
                stabilizer_order: c.stabilizer_order,
                profile: profile_of[i],
                listed_rows: listed[i].clone(),
            }
        })
        .collect();
    for c in reported.iter().filter(|c| c.listed_rows.is_empty()) {
        let twins: Vec<String> = reported
            .iter()
            .filter(|o| o.profile == c.profile && o.index != c.index)
            .map(|o| o.index.to_string())
            .collect();
        // rows whose printed vector is unusable but whose section fits this class
        let candidates: Vec<String> = rows
            .iter()
            .zip(&header_of)
            .filter(|(r, sig)| {
                (r.class.is_none() || duplicates.contains(&r.row))
                    && sig
                        .as_ref()
                        .is_some_and(|sig| sig.to_string() == c.type_signature)
            })
            .map(|(r, _)| r.row.to_string())
            .collect();
        let detail = if !candidates.is_empty() {
            format!(
                "class {} ({}, h={}) is not matched; printed row(s) {} of the same type are unusable or repeat another row",
                c.index,
                c.representative,
                c.h,
                candidates.join(", ")
            )
        } else if twins.is_empty() {
            format!(
                "class {} ({}, h={}) is not listed",
                c.index, c.representative, c.h
            )
        } else {
            format!(
                "class {} ({}, h={}) is not listed; same type, h and enumerator as class {}",
                c.index,
                c.representative,
                c.h,
                twins.join(", ")
            )
        };
        errata.push(Erratum {
            row: None,
            kind: ErratumKind::UnlistedClass,
            detail,
        });
    }
    if classes.len() != instance.caption_count {
        errata.push(Erratum {
            row: None,
            kind: ErratumKind::CountMismatch,
            detail: format!(
                "caption states {} classes; {} are inequivalent, {} distinct (type, h, enumerator) profiles",
                instance.caption_count,
                classes.len(),
                profiles.len()
            ),
        });
    }
    errata.sort_by(|a, b| (a.row.is_none(), a.row, a.kind).cmp(&(b.row.is_none(), b.row, b.kind)));

    ClassTableReport {
        table: instance.id.into(),
        s,
        instance: instance.label(),
        t: instance.t,
        caption_count: instance.caption_count,
        class_count: classes.len(),
        profile_count: profiles.len(),
        labeled_total,
        classes: reported,
        rows,
        groups,
        errata,
    }
}

fn errata_markdown(out: &mut String, errata: &[Erratum]) {
    if errata.is_empty() {
        return;
    }
    out.push_str("\n### Discrepancies with the printed table\n\n");
    for e in errata {
        let kind = serde_json::to_value(e.kind)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default();
        match e.row {
            Some(r) => {
                let _ = writeln!(out, "- row {r}: {kind}: {}", e.detail);
            }
            None => {
                let _ = writeln!(out, "- {kind}: {}", e.detail);
            }
        }
    }
}

fn bounds_markdown(b: &BoundsReport) -> String {
    let mut out = format!("## Table 1 at s = {}\n\n", b.s);
    out.push_str("| n | t | d_a | d_l | printed d_a | printed d_l |\n|---|---|---|---|---|---|\n");
    for r in &b.rows {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} |",
            r.n, r.t, r.d_a, r.d_l, r.printed_d_a, r.printed_d_l
        );
    }
    errata_markdown(&mut out, &b.errata);
    out
}

fn classes_markdown(c: &ClassTableReport) -> String {
    let mut out = format!(
        "## Table {} at s = {}: normalized {} codes (length 31s+{})\n\n",
        c.table, c.s, c.instance, c.t
    );
    let _ = writeln!(
        out,
        "caption: {} | inequivalent classes: {} | distinct profiles: {} | labeled solutions: {}\n",
        c.caption_count, c.class_count, c.profile_count, c.labeled_total
    );
    out.push_str("| # | type | defining vector | h | weight enumerator | at s | orbit | stabilizer | rows |\n");
    out.push_str("|---|---|---|---|---|---|---|---|---|\n");
    for class in &c.classes {
        let rows: Vec<String> = class.listed_rows.iter().map(usize::to_string).collect();
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} | {} | {} | {} |",
            class.index,
            class.type_signature,
            class.representative,
            class.h,
            class.weight_enumerator,
            class.weight_enumerator_at_s.as_deref().unwrap_or("-"),
            class.orbit_size,
            class.stabilizer_order,
            if rows.is_empty() {
                "unlisted".into()
            } else {
                rows.join(", ")
            }
        );
    }
    errata_markdown(&mut out, &c.errata);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offsets() {
        assert_eq!(parse_offset("16s"), Some(0));
        assert_eq!(parse_offset("16s+14"), Some(14));
        assert_eq!(parse_offset("16s-2"), Some(-2));
        assert_eq!(parse_offset("16s*2"), None);
        assert_eq!(parse_offset("15s"), None);
    }

    #[test]
    fn builtin_fixture_shape() {
        let f = Fixtures::builtin();
        assert_eq!(f.bounds.len(), 31);
        for inst in &TABLE_INSTANCES {
            let printed: usize = f.groups_of(inst.id).iter().map(|g| g.rows).sum();
            assert_eq!(printed, f.rows_of(inst.id).len(), "table {}", inst.id);
        }
        assert_eq!(f.rows_of("2").len(), 19);
        assert_eq!(f.rows_of("7").len(), 7);
    }

    #[test]
    fn malformed_fixture_is_rejected() {
        let err = Fixtures::parse("table,row\n", BUILTIN_TABLE_TYPES, BUILTIN_TABLE1).unwrap_err();
        assert!(matches!(err, FixtureError::Header { .. }));
        let bad = format!("{TABLES_HEADER}\n2,x,(0),1,1\n");
        let err = Fixtures::parse(&bad, BUILTIN_TABLE_TYPES, BUILTIN_TABLE1).unwrap_err();
        assert!(matches!(err, FixtureError::Format { line: 2, .. }));
        let bad = format!("{TABLE1_HEADER}\n0,16t,16s\n");
        assert!(Fixtures::parse(BUILTIN_TABLES, BUILTIN_TABLE_TYPES, &bad).is_err());
    }

    #[test]
    fn lenient_vector_parse() {
        let (l, defect) = parse_printed("1222201102222110022220101222211)");
        assert_eq!(l.unwrap().length(), 41);
        assert!(defect.is_some());
        let (l, defect) = parse_printed("(33333313233333133330133333233133)");
        assert!(l.is_none() && defect.is_some());
    }

    #[test]
    fn bounds_rows_match_for_small_s() {
        let f = Fixtures::builtin();
        for s in 0..=3 {
            let report = reproduce_bounds(s, &f);
            assert!(report.errata.is_empty(), "{:?}", report.errata);
            assert_eq!(report.rows.len(), if s == 0 { 17 } else { 31 });
        }
    }
}
