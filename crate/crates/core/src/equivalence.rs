//! The action of `GL(k, 2)` on defining vectors, equivalence tests,
//! canonical forms and orbit classification.
//!
//! An invertible matrix `A` permutes the points of the projective space; it
//! acts on a defining vector by moving multiplicities along:
//! `apply(A, l)[A x] = l[x]`. Searches work with `B = A^-1` instead, because
//! `apply(A, l)[y] = l[B y]` and `B` is pinned down one basis image at a
//! time: the images of `e_0..e_i` fix the entries at points `1..2^(i+1)`.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{griesmer_max_distance, CodeProfile};
use crate::defining::{parity, point_count, weight_vector, DefiningVector, TypeSignature};
use crate::enumeration::{
    complete_prefix, enumerate_with_budget, row_to_vector, Budget, EnumerationError, SearchSpec,
    SolutionSet,
};
use crate::gf2::BitMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EquivalenceError {
    #[error("basis images {0:?} are not linearly independent")]
    Singular(Vec<u32>),
    #[error("expected {expected} basis images, got {got}")]
    WrongImageCount { expected: usize, got: usize },
    #[error("point value {value} outside 1..={max}")]
    PointOutOfRange { value: u32, max: u32 },
    #[error("dimension mismatch: automorphism has k={left}, vector has k={right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("solution set is not a union of orbits: an image of row {row} is missing")]
    NotOrbitUnion { row: usize },
    #[error("orbit of size {orbit} disagrees with stabilizer order {stabilizer}")]
    OrbitStabilizer { orbit: u64, stabilizer: u64 },
}

/// `|GL(k, 2)| = prod_{i<k} (2^k - 2^i)`.
pub fn group_order(k: usize) -> u64 {
    (0..k).map(|i| (1u64 << k) - (1u64 << i)).product()
}

/// `span[m]` is the XOR of `images[j]` over the set bits `j` of `m`.
fn span_of(images: &[u32]) -> Vec<u32> {
    let mut span = vec![0u32; 1 << images.len()];
    for (j, &b) in images.iter().enumerate() {
        let half = 1 << j;
        for m in 0..half {
            span[half + m] = span[m] ^ b;
        }
    }
    span
}

/// An element of `GL(k, 2)` together with the permutation it induces on
/// the `2^k - 1` points (0-based indices).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinearAutomorphism {
    k: usize,
    images: Vec<u32>,
    permutation: Vec<usize>,
}

impl LinearAutomorphism {
    /// The matrix whose `j`-th column is the point value `images[j]`.
    pub fn from_images(k: usize, images: &[u32]) -> Result<Self, EquivalenceError> {
        if images.len() != k {
            return Err(EquivalenceError::WrongImageCount {
                expected: k,
                got: images.len(),
            });
        }
        let max = point_count(k) as u32;
        if let Some(&value) = images.iter().find(|&&v| v == 0 || v > max) {
            return Err(EquivalenceError::PointOutOfRange { value, max });
        }
        let span = span_of(images);
        let mut seen = vec![false; span.len()];
        for &v in &span {
            if seen[v as usize] {
                return Err(EquivalenceError::Singular(images.to_vec()));
            }
            seen[v as usize] = true;
        }
        Ok(Self {
            k,
            images: images.to_vec(),
            permutation: span[1..].iter().map(|&v| v as usize - 1).collect(),
        })
    }

    pub fn from_matrix(m: &BitMatrix) -> Result<Self, EquivalenceError> {
        let images: Vec<u32> = (0..m.cols()).map(|j| m.column_word(j)).collect();
        if m.rows() != m.cols() {
            return Err(EquivalenceError::WrongImageCount {
                expected: m.rows(),
                got: m.cols(),
            });
        }
        Self::from_images(m.rows(), &images)
    }

    pub fn identity(k: usize) -> Self {
        let images: Vec<u32> = (0..k).map(|j| 1 << j).collect();
        Self::from_images(k, &images).expect("unit vectors are independent")
    }

    /// Uniform over the group: each basis image is drawn outside the span of
    /// the previous ones.
    pub fn random<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Self {
        let max = point_count(k) as u32;
        let mut images = Vec::with_capacity(k);
        while images.len() < k {
            let span = span_of(&images);
            let v = rng.gen_range(1..=max);
            if !span.contains(&v) {
                images.push(v);
            }
        }
        Self::from_images(k, &images).expect("independent by construction")
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn matrix(&self) -> BitMatrix {
        BitMatrix::from_column_words(self.k, &self.images)
    }

    /// `permutation[i]` is the index of the image of point `i`.
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// Image of a point given by its value `1..2^k`.
    pub fn map_point(&self, value: u32) -> u32 {
        self.permutation[value as usize - 1] as u32 + 1
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let images: Vec<u32> = other.images.iter().map(|&v| self.map_point(v)).collect();
        Self::from_images(self.k, &images).expect("product of invertible maps")
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0u32; self.k];
        for (i, &p) in self.permutation.iter().enumerate() {
            let target = p as u32 + 1;
            if target.is_power_of_two() {
                images[target.trailing_zeros() as usize] = i as u32 + 1;
            }
        }
        Self::from_images(self.k, &images).expect("inverse of invertible map")
    }
}

impl fmt::Debug for LinearAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearAutomorphism{:?}", self.images)
    }
}

/// `result[permutation[i]] = l[i]`.
pub fn apply(
    a: &LinearAutomorphism,
    l: &DefiningVector,
) -> Result<DefiningVector, EquivalenceError> {
    if a.k != l.k() {
        return Err(EquivalenceError::DimensionMismatch {
            left: a.k,
            right: l.k(),
        });
    }
    Ok(DefiningVector::new(l.k(), permute(&a.permutation, l.entries())).expect("same length"))
}

fn permute<T: Copy + Default>(perm: &[usize], values: &[T]) -> Vec<T> {
    let mut out = vec![T::default(); values.len()];
    for (i, &v) in values.iter().enumerate() {
        out[perm[i]] = v;
    }
    out
}

/// Per-point invariant: the multiplicity and the sorted weights of the
/// codewords that are nonzero there.
fn fingerprints(l: &DefiningVector) -> Vec<(u32, Vec<u64>)> {
    let w = weight_vector(l);
    let width = point_count(l.k());
    (0..width)
        .map(|p| {
            let mut inc: Vec<u64> = (0..width)
                .filter(|&u| parity((u as u32 + 1) & (p as u32 + 1)) == 1)
                .map(|u| w.weights()[u])
                .collect();
            inc.sort_unstable();
            (l.entries()[p], inc)
        })
        .collect()
}

/// Colours for two vectors from a shared fingerprint table, so that a map
/// carrying one onto the other must preserve colours.
fn joint_colours(a: &DefiningVector, b: &DefiningVector) -> (Vec<u32>, Vec<u32>) {
    let fa = fingerprints(a);
    let fb = fingerprints(b);
    let mut table = BTreeMap::new();
    for f in fa.iter().chain(&fb) {
        let next = table.len() as u32;
        table.entry(f.clone()).or_insert(next);
    }
    (
        fa.iter().map(|f| table[f]).collect(),
        fb.iter().map(|f| table[f]).collect(),
    )
}

/// Backtracking over `B` with `src[B y] == dst[y]` for every point `y`.
/// The visitor sees the basis images of each solution and returns `false`
/// to stop.
fn for_each_match(k: usize, src: &[u32], dst: &[u32], visit: &mut dyn FnMut(&[u32]) -> bool) {
    fn rec(
        k: usize,
        level: usize,
        src: &[u32],
        dst: &[u32],
        images: &mut Vec<u32>,
        span: &mut Vec<u32>,
        used: &mut [bool],
        visit: &mut dyn FnMut(&[u32]) -> bool,
    ) -> bool {
        if level == k {
            return visit(images);
        }
        let half = 1usize << level;
        let width = src.len();
        for c in 1..=width as u32 {
            if used[c as usize] || src[c as usize - 1] != dst[half - 1] {
                continue;
            }
            if !(1..half).all(|m| src[(c ^ span[m]) as usize - 1] == dst[half + m - 1]) {
                continue;
            }
            for m in 0..half {
                let v = c ^ span[m];
                span.push(v);
                used[v as usize] = true;
            }
            images.push(c);
            let go_on = rec(k, level + 1, src, dst, images, span, used, visit);
            images.pop();
            for _ in 0..half {
                let v = span.pop().expect("pushed above");
                used[v as usize] = false;
            }
            if !go_on {
                return false;
            }
        }
        true
    }
    let mut used = vec![false; src.len() + 1];
    used[0] = true;
    rec(
        k,
        0,
        src,
        dst,
        &mut Vec::new(),
        &mut vec![0],
        &mut used,
        visit,
    );
}

/// A witness `A` with `apply(A, l1) == l2`, if one exists.
pub fn are_equivalent(l1: &DefiningVector, l2: &DefiningVector) -> Option<LinearAutomorphism> {
    if l1.k() != l2.k() || l1.length() != l2.length() {
        return None;
    }
    if weight_vector(l1).sorted() != weight_vector(l2).sorted() {
        return None;
    }
    let (c1, c2) = joint_colours(l1, l2);
    let mut found = None;
    for_each_match(l1.k(), &c1, &c2, &mut |images| {
        found = Some(images.to_vec());
        false
    });
    let b = LinearAutomorphism::from_images(l1.k(), &found?).expect("search yields bases");
    Some(b.inverse())
}

/// Order of `{A : apply(A, l) == l}`.
pub fn stabilizer_order(l: &DefiningVector) -> u64 {
    if l.max_entry() == l.min_entry() {
        return group_order(l.k());
    }
    let (c, _) = joint_colours(l, l);
    let mut count = 0u64;
    for_each_match(l.k(), &c, &c, &mut |_| {
        count += 1;
        true
    });
    count
}

/// All stabilizer elements, as automorphisms.
pub fn stabilizer(l: &DefiningVector) -> Vec<LinearAutomorphism> {
    let (c, _) = joint_colours(l, l);
    let mut out = Vec::new();
    for_each_match(l.k(), &c, &c, &mut |images| {
        out.push(LinearAutomorphism::from_images(l.k(), images).expect("search yields bases"));
        true
    });
    out
}

/// The lexicographically least vector in the orbit of `l`.
///
/// Level by level, every partial basis that achieves the smallest block of
/// entries so far survives; at the end the survivors form a coset of the
/// stabilizer, all giving the same vector.
pub fn canonical_form(l: &DefiningVector) -> DefiningVector {
    canonical_with_witness(l).0
}

/// The canonical form and some `A` with `apply(A, l)` equal to it.
pub fn canonical_with_witness(l: &DefiningVector) -> (DefiningVector, LinearAutomorphism) {
    let k = l.k();
    if l.max_entry() == l.min_entry() {
        return (l.clone(), LinearAutomorphism::identity(k));
    }
    let values = l.entries();
    let width = values.len() as u32;
    let mut result: Vec<u32> = Vec::with_capacity(values.len());
    let mut states: Vec<Vec<u32>> = vec![Vec::new()];
    for level in 0..k {
        let half = 1usize << level;
        let mut best: Option<Vec<u32>> = None;
        let mut next: Vec<Vec<u32>> = Vec::new();
        let mut block = vec![0u32; half];
        for images in &states {
            let span = span_of(images);
            'candidates: for c in 1..=width {
                if span.contains(&c) {
                    continue;
                }
                let mut less = false;
                for m in 0..half {
                    let v = values[(c ^ span[m]) as usize - 1];
                    if !less {
                        if let Some(b) = &best {
                            match v.cmp(&b[m]) {
                                std::cmp::Ordering::Greater => continue 'candidates,
                                std::cmp::Ordering::Less => less = true,
                                std::cmp::Ordering::Equal => {}
                            }
                        }
                    }
                    block[m] = v;
                }
                if less || best.is_none() {
                    best = Some(block.clone());
                    next.clear();
                }
                let mut grown = images.clone();
                grown.push(c);
                next.push(grown);
            }
        }
        result.extend(best.expect("some candidate always remains"));
        states = next;
    }
    let b = LinearAutomorphism::from_images(k, &states[0]).expect("search yields bases");
    (
        DefiningVector::new(k, result).expect("full length"),
        b.inverse(),
    )
}

/// Visits every element of `GL(k, 2)` through its basis images and the
/// induced 0-based point permutation. Stops when the visitor returns `false`.
pub fn for_each_group_element(k: usize, visit: &mut dyn FnMut(&[u32], &[usize]) -> bool) {
    fn rec(
        k: usize,
        images: &mut Vec<u32>,
        span: &mut Vec<u32>,
        perm: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[u32], &[usize]) -> bool,
    ) -> bool {
        if images.len() == k {
            return visit(images, perm);
        }
        let half = span.len();
        let width = (1u32 << k) - 1;
        for c in 1..=width {
            if span.contains(&c) {
                continue;
            }
            for m in 0..half {
                let v = c ^ span[m];
                span.push(v);
                perm.push(v as usize - 1);
            }
            images.push(c);
            let go_on = rec(k, images, span, perm, visit);
            images.pop();
            span.truncate(half);
            perm.truncate(half - 1);
            if !go_on {
                return false;
            }
        }
        true
    }
    rec(k, &mut Vec::new(), &mut vec![0], &mut Vec::new(), visit);
}

/// Oracle: canonical form by scanning the whole group.
pub fn canonical_form_by_scan(l: &DefiningVector) -> DefiningVector {
    let mut best: Option<Vec<u32>> = None;
    for_each_group_element(l.k(), &mut |_, perm| {
        // perm maps point index i to the point B(i); candidate[y] = l[B y]
        let candidate: Vec<u32> = perm.iter().map(|&p| l.entries()[p]).collect();
        if best.as_ref().map_or(true, |b| candidate < *b) {
            best = Some(candidate);
        }
        true
    });
    DefiningVector::new(l.k(), best.expect("group is nonempty")).expect("full length")
}

/// Oracle: stabilizer order by scanning the whole group.
pub fn stabilizer_order_by_scan(l: &DefiningVector) -> u64 {
    let mut count = 0;
    for_each_group_element(l.k(), &mut |_, perm| {
        if perm
            .iter()
            .enumerate()
            .all(|(y, &p)| l.entries()[p] == l.entries()[y])
        {
            count += 1;
        }
        true
    });
    count
}

/// Oracle: equivalence by scanning the whole group.
pub fn are_equivalent_by_scan(l1: &DefiningVector, l2: &DefiningVector) -> bool {
    if l1.k() != l2.k() {
        return false;
    }
    let mut found = false;
    for_each_group_element(l1.k(), &mut |_, perm| {
        found = perm
            .iter()
            .enumerate()
            .all(|(y, &p)| l1.entries()[p] == l2.entries()[y]);
        !found
    });
    found
}

/// Generators of `GL(k, 2)`: the cyclic shift of the basis and the
/// transvection `e_1 -> e_1 + e_0`.
pub fn group_generators(k: usize) -> Vec<LinearAutomorphism> {
    let shift: Vec<u32> = (0..k).map(|j| 1 << ((j + 1) % k)).collect();
    let mut transvection: Vec<u32> = (0..k).map(|j| 1 << j).collect();
    if k >= 2 {
        transvection[1] = 0b11;
    }
    vec![
        LinearAutomorphism::from_images(k, &shift).expect("permutation matrix"),
        LinearAutomorphism::from_images(k, &transvection).expect("unipotent"),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceClass {
    pub representative: DefiningVector,
    pub type_signature: TypeSignature,
    pub orbit_size: u64,
    pub member_count: u64,
    pub stabilizer_order: u64,
    pub profile: CodeProfile,
}

impl EquivalenceClass {
    /// Builds a class from any member; the representative is canonical.
    pub fn of(l: &DefiningVector, member_count: u64) -> Result<Self, EquivalenceError> {
        let representative = canonical_form(l);
        let stab = stabilizer_order(&representative);
        let order = group_order(l.k());
        if order % stab != 0 {
            return Err(EquivalenceError::OrbitStabilizer {
                orbit: 0,
                stabilizer: stab,
            });
        }
        Ok(Self {
            type_signature: TypeSignature::of(&representative),
            profile: CodeProfile::of(&representative),
            orbit_size: order / stab,
            member_count,
            stabilizer_order: stab,
            representative,
        })
    }
}

/// Orders classes by type signature, then representative.
pub fn sort_classes(classes: &mut [EquivalenceClass]) {
    classes.sort_by(|a, b| {
        (&a.type_signature, &a.representative).cmp(&(&b.type_signature, &b.representative))
    });
}

/// Partitions a solution set into orbits.
///
/// The set is sorted and closed under the group, so its first unvisited
/// row is the least member of its orbit, which is the canonical form. The
/// orbit is walked with the two generators; every image must be present.
pub fn classify(set: &SolutionSet) -> Result<Vec<EquivalenceClass>, EquivalenceError> {
    let k = set.spec.k;
    let total = set.total() as usize;
    let generators = group_generators(k);
    let mut visited = vec![false; total];
    let mut classes = Vec::new();
    let mut queue = VecDeque::new();
    let mut image = vec![0u8; set.width()];
    for start in 0..total {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        queue.push_back(start);
        let mut members = 0u64;
        while let Some(i) = queue.pop_front() {
            members += 1;
            for g in &generators {
                let row = set.row(i);
                for (p, &v) in row.iter().enumerate() {
                    image[g.permutation[p]] = v;
                }
                let j = set
                    .position(&image)
                    .ok_or(EquivalenceError::NotOrbitUnion { row: i })?;
                if !visited[j] {
                    visited[j] = true;
                    queue.push_back(j);
                }
            }
        }
        let class = EquivalenceClass::of(&row_to_vector(k, set.row(start)), members)?;
        if class.orbit_size != members {
            return Err(EquivalenceError::OrbitStabilizer {
                orbit: members,
                stabilizer: class.stabilizer_order,
            });
        }
        debug_assert_eq!(class.representative, set.get(start));
        classes.push(class);
    }
    sort_classes(&mut classes);
    Ok(classes)
}

/// Classes from an arbitrary list of vectors that meets every orbit of
/// interest at least once: duplicates are merged by canonical form and each
/// class is credited with its full orbit.
pub fn classify_representatives<I>(vectors: I) -> Result<Vec<EquivalenceClass>, EquivalenceError>
where
    I: IntoIterator<Item = DefiningVector>,
{
    let mut seen = std::collections::BTreeSet::new();
    let mut classes = Vec::new();
    for l in vectors {
        let c = canonical_form(&l);
        if seen.insert(c.clone()) {
            let mut class = EquivalenceClass::of(&c, 0)?;
            class.member_count = class.orbit_size;
            classes.push(class);
        }
    }
    sort_classes(&mut classes);
    Ok(classes)
}

#[derive(Debug, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error(transparent)]
    Equivalence(#[from] EquivalenceError),
}

/// Outcome of [`classify_by_residuals`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualClassification {
    pub spec: SearchSpec,
    pub classes: Vec<EquivalenceClass>,
    /// inequivalent hyperplane restrictions that were extended
    pub residual_classes: u64,
    /// labeled extensions produced before deduplication
    pub completions: u64,
    pub nodes: u64,
}

impl ResidualClassification {
    /// Size of the labeled solution set, by orbit-stabilizer.
    pub fn labeled_total(&self) -> u64 {
        self.classes.iter().map(|c| c.orbit_size).sum()
    }

    pub fn labeled_by_type(&self) -> BTreeMap<TypeSignature, u64> {
        let mut out = BTreeMap::new();
        for c in &self.classes {
            *out.entry(c.type_signature.clone()).or_insert(0) += c.orbit_size;
        }
        out
    }
}

/// Classifies the solutions of `spec` without listing every labeled one.
///
/// A code of minimum weight `d'` has a codeword of weight `d'`; moving its
/// kernel onto the hyperplane of points `1..2^(k-1)` leaves there a
/// `(k-1)`-dimensional vector of sum `n - d'` whose codewords all weigh at
/// least `ceil(d'/2)` (a codeword `c` and `c + m` together weigh
/// `2a + d' >= 2d'`, with `a` the weight of `c` on the hyperplane). Up to
/// the stabilizer of that hyperplane, the restriction may be taken canonical,
/// so extending one representative per `GL(k-1, 2)`-class over the affine
/// points reaches every orbit. Extensions are merged by canonical form.
pub fn classify_by_residuals(
    spec: &SearchSpec,
    budget: Budget,
) -> Result<ResidualClassification, ClassifyError> {
    spec.validate()?;
    if spec.k < 3 {
        let set = enumerate_with_budget(spec, budget)?;
        let classes = classify(&set)?;
        return Ok(ResidualClassification {
            spec: *spec,
            residual_classes: 0,
            completions: set.total(),
            nodes: set.nodes,
            classes,
        });
    }
    let distances = if spec.exact_distance {
        spec.d..=spec.d
    } else {
        spec.d..=griesmer_max_distance(spec.k, spec.n)
    };
    let mut canon = std::collections::BTreeSet::new();
    let mut residual_classes = 0;
    let mut completions = 0;
    let mut nodes = 0;
    for d in distances {
        let rest = spec.n - d;
        let half = d.div_ceil(2);
        if rest < half {
            continue;
        }
        let residual_spec =
            SearchSpec::new(rest, spec.k - 1, half, spec.max_entry).with_exact_distance(false);
        let residuals = enumerate_with_budget(&residual_spec, budget)?;
        nodes += residuals.nodes;
        let reps = classify(&residuals)?;
        residual_classes += reps.len() as u64;
        let full = SearchSpec {
            d,
            exact_distance: true,
            ..*spec
        };
        for rep in reps {
            let prefix: Vec<u8> = rep
                .representative
                .entries()
                .iter()
                .map(|&v| v as u8)
                .collect();
            let extended = complete_prefix(&full, &prefix, budget)?;
            nodes += extended.nodes;
            completions += extended.total();
            let forms: Vec<DefiningVector> = {
                use rayon::prelude::*;
                let rows: Vec<&[u8]> = extended.rows().collect();
                rows.par_iter()
                    .map(|r| canonical_form(&row_to_vector(spec.k, r)))
                    .collect()
            };
            canon.extend(forms);
        }
    }
    let classes = classify_representatives(canon)?;
    Ok(ResidualClassification {
        spec: *spec,
        classes,
        residual_classes,
        completions,
        nodes,
    })
}

pub const CLASSIFICATION_CSV_HEADER: &str =
    "class_id,representative,member_count,orbit_size,h,weight_enumerator";

pub fn classification_csv(classes: &[EquivalenceClass]) -> String {
    let mut out = String::from(CLASSIFICATION_CSV_HEADER);
    out.push('\n');
    for (i, c) in classes.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            i + 1,
            c.representative.to_text(),
            c.member_count,
            c.orbit_size,
            c.profile.h,
            c.profile.weight_enumerator.to_compact()
        ));
    }
    out
}
