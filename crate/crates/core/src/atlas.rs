//! Catalogues of both families, one entry per equivalence class.
//!
//! The projective atlas is built from similarity classes rather than by
//! enumerating all `q⁹` matrices: each class has a canonical matrix and a
//! size `|GL(3, q)| / |centralizer|`, and classes are merged when their
//! polynomial pairs are related by `t ↦ ρt + μ`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::affine::{affine_tag, build_gm, canonical_plan, classify_affine, AffineTag};
use crate::error::Result;
use crate::gf::{Elem, Field};
use crate::homog::HomogPoly;
use crate::matrix::{Matrix23, Matrix3};
use crate::plane::{
    build_fa, canonical_matrix, equiv_key, predicted_decomposition, CaseLabel, CaseTag, EquivKey,
    ResidualKind,
};
use crate::poly::{CubicShape, UniPoly};
use crate::verify::{affine_report, decomposition_report};

/// A similarity class of 3×3 matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimilarityClass {
    pub label: CaseLabel,
    pub canonical: Matrix3,
    pub size: u64,
}

pub fn gl3_order(q: u64) -> u64 {
    (q * q * q - 1) * (q * q * q - q) * (q * q * q - q * q)
}

/// Order of the centralizer in GL(3, q) of a matrix in this case.
pub fn centralizer_order(tag: CaseTag, q: u64) -> u64 {
    match tag {
        CaseTag::Nonsingular => q * q * q - 1,
        CaseTag::Case1 => (q * q - 1) * (q - 1),
        CaseTag::Case2 => (q - 1).pow(3),
        CaseTag::Case3_1 => q * (q - 1).pow(2),
        CaseTag::Case3_2 => (q * q - 1) * (q * q - q) * (q - 1),
        CaseTag::Case4_1 => q * q * (q - 1),
        CaseTag::Case4_2 => q.pow(3) * (q - 1).pow(2),
        CaseTag::Case4_3 => gl3_order(q),
    }
}

/// Every similarity class, scalars included, ordered by characteristic
/// polynomial and then by case.
pub fn similarity_classes(field: &Field) -> Vec<SimilarityClass> {
    let f = field;
    let q = u64::from(f.q());
    let mut labels = Vec::new();
    for c0 in f.elements() {
        for c1 in f.elements() {
            for c2 in f.elements() {
                let cubic = UniPoly::new(f, vec![c0, c1, c2, Elem::ONE]);
                match cubic.cubic_shape().expect("monic cubic") {
                    CubicShape::Irreducible => labels.push(CaseLabel::Nonsingular { charpoly: cubic }),
                    CubicShape::LinearTimesIrredQuadratic { root, quad } => {
                        labels.push(CaseLabel::Case1 { alpha: root, quad })
                    }
                    CubicShape::ThreeDistinctRoots(roots) => labels.push(CaseLabel::Case2 { roots }),
                    CubicShape::DoubleRootPlusSimple { double, simple } => {
                        labels.push(CaseLabel::Case3_1 { alpha: double, beta: simple });
                        labels.push(CaseLabel::Case3_2 { alpha: double, beta: simple });
                    }
                    CubicShape::TripleRoot(alpha) => {
                        labels.push(CaseLabel::Case4_1 { alpha });
                        labels.push(CaseLabel::Case4_2 { alpha });
                        labels.push(CaseLabel::Case4_3 { alpha });
                    }
                }
            }
        }
    }
    labels
        .into_iter()
        .map(|label| SimilarityClass {
            canonical: canonical_matrix(f, &label),
            size: gl3_order(q) / centralizer_order(label.tag(), q),
            label,
        })
        .collect()
}

/// Lines, multiplicities and residual of a canonical decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentSummary {
    pub distinct_lines: usize,
    pub multiplicities: Vec<u32>,
    pub residual_degree: u32,
    pub residual_kind: Option<ResidualKind>,
    pub residual: Option<HomogPoly>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AtlasEntry {
    pub q: u32,
    pub representative: Matrix3,
    pub case: CaseTag,
    pub key: EquivKey,
    pub canonical_equation: HomogPoly,
    pub components: ComponentSummary,
    /// Number of matrices in the class.
    pub orbit_size: u64,
    pub similarity_classes: usize,
    pub report_match: bool,
}

/// One entry per equivalence class of non-scalar matrices, ordered by the
/// index of the representative.
pub fn projective_atlas(field: &Field) -> Vec<AtlasEntry> {
    let f = field;
    let mut groups: BTreeMap<EquivKey, Vec<SimilarityClass>> = BTreeMap::new();
    for class in similarity_classes(f) {
        if class.label.tag() == CaseTag::Case4_3 {
            continue;
        }
        let key = equiv_key(f, &class.canonical);
        groups.entry(key).or_default().push(class);
    }
    let groups: Vec<(EquivKey, Vec<SimilarityClass>)> = groups.into_iter().collect();
    let mut entries: Vec<AtlasEntry> = groups
        .into_par_iter()
        .map(|(key, classes)| {
            let rep = classes
                .iter()
                .min_by_key(|c| c.canonical.index(f))
                .expect("nonempty group");
            let a = rep.canonical;
            let components = match predicted_decomposition(f, &a) {
                Ok(plan) => ComponentSummary {
                    distinct_lines: plan.lines.len(),
                    multiplicities: plan.lines.iter().map(|(_, m)| *m).collect(),
                    residual_degree: plan.residual.as_ref().map_or(0, |r| r.degree),
                    residual_kind: plan.residual.as_ref().map(|r| r.kind),
                    residual: plan.residual.map(|r| r.equation),
                },
                Err(_) => ComponentSummary {
                    distinct_lines: 0,
                    multiplicities: Vec::new(),
                    residual_degree: f.q() + 2,
                    residual_kind: None,
                    residual: Some(build_fa(f, &a)),
                },
            };
            AtlasEntry {
                q: f.q(),
                representative: a,
                case: rep.label.tag(),
                key,
                canonical_equation: build_fa(f, &a),
                components,
                orbit_size: classes.iter().map(|c| c.size).sum(),
                similarity_classes: classes.len(),
                report_match: decomposition_report(f, &a).matches,
            }
        })
        .collect();
    entries.sort_by_key(|e| e.representative.index(f));
    entries
}

/// Brute-force class sizes: every non-scalar matrix keyed directly.
pub fn projective_orbits_by_enumeration(field: &Field) -> BTreeMap<EquivKey, u64> {
    let f = field;
    let counts: Vec<EquivKey> = (0..Matrix3::count(f))
        .into_par_iter()
        .filter_map(|i| {
            let a = Matrix3::from_index(f, i);
            (!a.is_scalar()).then(|| equiv_key(f, &a))
        })
        .collect();
    let mut out = BTreeMap::new();
    for k in counts {
        *out.entry(k).or_insert(0) += 1;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffineAtlasEntry {
    pub q: u32,
    pub tag: AffineTag,
    /// First matrix with this tag in index order.
    pub representative: Matrix23,
    pub canonical: Matrix23,
    pub canonical_equation: HomogPoly,
    pub components: ComponentSummary,
    pub points_at_infinity: usize,
    /// Number of nonzero matrices with this tag.
    pub count: u64,
    pub distinct_canonical_forms: usize,
    pub report_match: bool,
}

/// One entry per tag present at this `q`, in tag order.
pub fn affine_atlas(field: &Field) -> Result<Vec<AffineAtlasEntry>> {
    let f = field;
    let labels: Vec<(u64, AffineTag, Matrix23)> = (1..Matrix23::count(f))
        .into_par_iter()
        .map(|i| {
            let m = Matrix23::from_index(f, i);
            let tag = affine_tag(f, &m)?;
            let canonical = classify_affine(f, &m)?.canonical;
            Ok((i, tag, canonical))
        })
        .collect::<Result<_>>()?;
    let mut by_tag: BTreeMap<AffineTag, (u64, u64, std::collections::BTreeSet<Matrix23>)> = BTreeMap::new();
    for (i, tag, canonical) in labels {
        let e = by_tag.entry(tag).or_insert((i, 0, Default::default()));
        e.1 += 1;
        e.2.insert(canonical);
    }
    by_tag
        .into_iter()
        .map(|(tag, (first, count, canon))| {
            let m = Matrix23::from_index(f, first);
            let label = classify_affine(f, &m)?;
            let plan = canonical_plan(f, &label)?;
            Ok(AffineAtlasEntry {
                q: f.q(),
                tag,
                representative: m,
                canonical: label.canonical,
                canonical_equation: build_gm(f, &label.canonical)?,
                components: ComponentSummary {
                    distinct_lines: plan.lines.len(),
                    multiplicities: plan.lines.iter().map(|(_, k)| *k).collect(),
                    residual_degree: plan.residual.as_ref().map_or(0, |r| r.degree),
                    residual_kind: plan.residual.as_ref().map(|r| r.kind),
                    residual: plan.residual.map(|r| r.equation),
                },
                points_at_infinity: plan.points_at_infinity,
                count,
                distinct_canonical_forms: canon.len(),
                report_match: affine_report(f, &m)?.matches,
            })
        })
        .collect()
}
