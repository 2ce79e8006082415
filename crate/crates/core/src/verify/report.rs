//! Prediction-versus-observation reports for single matrices.

use serde::Serialize;

use super::{concurrency, count_points, find_linear_components, singular_points, vanishes_everywhere};
use crate::affine::{
    apply_transform, canonical_plan, classify_affine, g_quadratic, has_canonical_shape, points_at_infinity,
    AffineLabel, AffineTag,
};
use crate::geometry::{Line, ProjPoint};
use crate::gf::{Elem, Field};
use crate::homog::HomogPoly;
use crate::matrix::{Matrix23, Matrix3};
use crate::plane::{
    build_fa, charpoly, classify, minpoly, predicted_decomposition, CaseLabel, CaseTag, Concurrency, ResidualKind,
};
use crate::poly::UniPoly;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Predicted {
    pub lines: Vec<(Line, u32)>,
    pub residual_degree: u32,
    /// `None` for a residual that is the whole plane-filling curve, and
    /// when nothing is left after the lines.
    pub residual_kind: Option<ResidualKind>,
    pub expected_points: Option<u64>,
    pub expected_singular_points: Option<usize>,
    pub concurrency: Concurrency,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Observed {
    pub lines: Vec<(Line, u32)>,
    pub residual_degree: u32,
    pub residual_points: u64,
    pub singular_points: usize,
    pub concurrent: bool,
    pub concurrency: Concurrency,
    pub zero_polynomial: bool,
    /// Whether every rational point lies on the whole curve.
    pub vanishes_everywhere: bool,
    /// Singular rational points of the whole curve.
    pub curve_singular_points: usize,
    #[serde(skip)]
    pub residual: Option<HomogPoly>,
}

impl Observed {
    fn zero() -> Observed {
        Observed {
            lines: Vec::new(),
            residual_degree: 0,
            residual_points: 0,
            singular_points: 0,
            concurrent: false,
            concurrency: Concurrency {
                distinct_lines: 0,
                max_through_point: 0,
            },
            zero_polynomial: true,
            vanishes_everywhere: true,
            curve_singular_points: 0,
            residual: None,
        }
    }

    /// Line sieve and point data for a nonzero curve.
    fn of(field: &Field, curve: &HomogPoly) -> Observed {
        let comps = find_linear_components(curve).expect("nonzero curve");
        let mut lines = comps.lines.clone();
        lines.sort();
        let conc = concurrency(field, &comps.distinct_lines());
        let residual = comps.residual;
        let (residual_points, singular) = if residual.degree() > 0 {
            (
                count_points(&residual).expect("nonzero residual") as u64,
                singular_points(&residual).len(),
            )
        } else {
            (0, 0)
        };
        Observed {
            lines,
            residual_degree: residual.degree(),
            residual_points,
            singular_points: singular,
            concurrent: conc.all_concurrent(),
            concurrency: conc,
            zero_polynomial: false,
            vanishes_everywhere: vanishes_everywhere(curve),
            curve_singular_points: singular_points(curve).len(),
            residual: (residual.degree() > 0).then_some(residual),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub q: u32,
    pub matrix: Matrix3,
    pub case: CaseTag,
    pub charpoly: UniPoly,
    pub minpoly: UniPoly,
    pub predicted: Option<Predicted>,
    pub observed: Observed,
    #[serde(rename = "match")]
    pub matches: bool,
    pub discrepancies: Vec<String>,
}

/// Collects mismatches between a prediction and the oracle.
struct Comparison {
    discrepancies: Vec<String>,
}

impl Comparison {
    fn check<T: PartialEq + std::fmt::Debug>(&mut self, what: &str, predicted: T, observed: T) {
        if predicted != observed {
            self.discrepancies
                .push(format!("{what}: predicted {predicted:?}, observed {observed:?}"));
        }
    }

    fn components(&mut self, predicted: &Predicted, residual: Option<&HomogPoly>, observed: &Observed) {
        self.check("lines", &predicted.lines, &observed.lines);
        self.check("residual degree", predicted.residual_degree, observed.residual_degree);
        self.check("concurrency", predicted.concurrency, observed.concurrency);
        if let Some(n) = predicted.expected_points {
            self.check("residual points", n, observed.residual_points);
        }
        if let Some(n) = predicted.expected_singular_points {
            self.check("residual singular points", n, observed.singular_points);
        }
        match (residual, &observed.residual) {
            (Some(want), Some(got)) => {
                if got.scalar_ratio(want).is_none() {
                    self.discrepancies
                        .push(format!("residual equation: predicted {want:?}, observed {got:?}"));
                }
            }
            (None, None) => {}
            (want, got) => self.discrepancies.push(format!(
                "residual presence: predicted {}, observed {}",
                want.is_some(),
                got.is_some()
            )),
        }
    }
}

fn pull_lines(field: &Field, lines: &[(Line, u32)], t: &Matrix3) -> Vec<(Line, u32)> {
    let tt = t.transpose();
    let mut out: Vec<(Line, u32)> = lines
        .iter()
        .map(|(l, m)| (Line::new(field, tt.mul_vec(field, &l.coeffs())).expect("invertible map"), *m))
        .collect();
    out.sort();
    out
}

pub fn decomposition_report(field: &Field, a: &Matrix3) -> DecompositionReport {
    let f = field;
    let q = f.q();
    let fa = build_fa(f, a);
    let label = classify(f, a);
    let case = label.tag();
    let mut cmp = Comparison {
        discrepancies: Vec::new(),
    };
    let (predicted, observed) = if fa.is_zero() || case == CaseTag::Case4_3 {
        cmp.check("zero polynomial", case == CaseTag::Case4_3, fa.is_zero());
        (None, Observed::zero())
    } else {
        let observed = Observed::of(f, &fa);
        cmp.check("vanishes on all rational points", true, observed.vanishes_everywhere);
        let predicted = if let CaseLabel::Nonsingular { .. } = label {
            let qq = u64::from(q);
            let predicted = Predicted {
                lines: Vec::new(),
                residual_degree: q + 2,
                residual_kind: None,
                expected_points: Some(qq * qq + qq + 1),
                expected_singular_points: Some(0),
                concurrency: Concurrency {
                    distinct_lines: 0,
                    max_through_point: 0,
                },
            };
            cmp.components(&predicted, Some(&fa), &observed);
            predicted
        } else {
            match predicted_decomposition(f, a) {
                Ok(plan) => {
                    let t = plan.pullback(f);
                    let residual = plan.pulled_back_residual(f);
                    let predicted = Predicted {
                        lines: pull_lines(f, &plan.lines, &t),
                        residual_degree: plan.residual.as_ref().map_or(0, |r| r.degree),
                        residual_kind: plan.residual.as_ref().map(|r| r.kind),
                        expected_points: plan.residual.as_ref().map(|r| r.expected_points),
                        expected_singular_points: plan.residual.as_ref().map(|r| r.kind.expected_singular_points()),
                        concurrency: plan.concurrency,
                    };
                    cmp.components(&predicted, residual.as_ref(), &observed);
                    predicted
                }
                Err(e) => {
                    cmp.discrepancies.push(format!("no prediction: {e}"));
                    return DecompositionReport {
                        q,
                        matrix: *a,
                        case,
                        charpoly: charpoly(f, a),
                        minpoly: minpoly(f, a),
                        predicted: None,
                        observed,
                        matches: false,
                        discrepancies: cmp.discrepancies,
                    };
                }
            }
        };
        (Some(predicted), observed)
    };
    DecompositionReport {
        q,
        matrix: *a,
        case,
        charpoly: charpoly(f, a),
        minpoly: minpoly(f, a),
        predicted,
        observed,
        matches: cmp.discrepancies.is_empty(),
        discrepancies: cmp.discrepancies,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffinePredicted {
    #[serde(flatten)]
    pub components: Predicted,
    pub points_at_infinity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffineObserved {
    #[serde(flatten)]
    pub components: Observed,
    pub points_at_infinity: Vec<ProjPoint>,
    /// Every point with `z ≠ 0` lies on the curve.
    pub contains_affine_plane: bool,
    pub rank: usize,
    pub quadratic_is_zero: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffineReport {
    pub q: u32,
    pub matrix: Matrix23,
    pub label: AffineLabel,
    pub predicted: AffinePredicted,
    pub observed: AffineObserved,
    #[serde(rename = "match")]
    pub matches: bool,
    pub discrepancies: Vec<String>,
}

impl AffineReport {
    pub fn tag(&self) -> AffineTag {
        self.label.tag
    }

    /// A component of degree at least 2 survives the line sieve.
    pub fn has_nonlinear_component(&self) -> bool {
        self.observed.components.residual_degree >= 2
    }
}

/// Report for a nonzero `M`; fails only on the zero matrix.
pub fn affine_report(field: &Field, m: &Matrix23) -> crate::error::Result<AffineReport> {
    let f = field;
    let q = f.q();
    let label = classify_affine(f, m)?;
    let plan = canonical_plan(f, &label)?;
    let gm = crate::affine::build_gm(f, m)?;
    let mut cmp = Comparison {
        discrepancies: Vec::new(),
    };
    cmp.check("witness image", label.canonical, apply_transform(f, m, &label.witness));
    cmp.check("canonical shape", true, has_canonical_shape(f, label.tag, &label.canonical));

    // G_M(X) = G_N(σ⁻¹X)
    let t = label.witness.inverse(f).matrix();
    let residual = plan.residual.as_ref().map(|r| r.equation.compose_linear(&t));
    let predicted = Predicted {
        lines: pull_lines(f, &plan.lines, &t),
        residual_degree: plan.residual.as_ref().map_or(0, |r| r.degree),
        residual_kind: plan.residual.as_ref().map(|r| r.kind),
        expected_points: plan.residual.as_ref().map(|r| r.expected_points),
        expected_singular_points: plan.residual.as_ref().map(|r| r.kind.expected_singular_points()),
        concurrency: plan.concurrency,
    };
    let observed = Observed::of(f, &gm);
    cmp.components(&predicted, residual.as_ref(), &observed);

    let at_infinity: Vec<ProjPoint> = f
        .elements()
        .map(|t| [Elem::ONE, t, Elem::ZERO])
        .chain(std::iter::once([Elem::ZERO, Elem::ONE, Elem::ZERO]))
        .filter(|c| gm.eval_at(*c).is_zero())
        .map(|c| ProjPoint::new(f, c).expect("nonzero point"))
        .collect();
    cmp.check("points at infinity", plan.points_at_infinity, at_infinity.len());
    let mut from_roots = points_at_infinity(f, m)?;
    from_roots.sort();
    let mut sorted = at_infinity.clone();
    sorted.sort();
    cmp.check("points at infinity from g", from_roots, sorted);

    let contains_affine_plane = f
        .elements()
        .all(|x| f.elements().all(|y| gm.eval_at([x, y, Elem::ONE]).is_zero()));
    cmp.check("contains the affine plane", true, contains_affine_plane);

    let rank = m.rank(f);
    let quadratic_is_zero = g_quadratic(f, m).is_zero();
    let nonlinear = observed.residual_degree >= 2;
    cmp.check(
        "nonlinear component iff rank 2 and g nonzero",
        rank == 2 && !quadratic_is_zero,
        nonlinear,
    );

    Ok(AffineReport {
        q,
        matrix: *m,
        label,
        predicted: AffinePredicted {
            components: predicted,
            points_at_infinity: plan.points_at_infinity,
        },
        observed: AffineObserved {
            components: observed,
            points_at_infinity: at_infinity,
            contains_affine_plane,
            rank,
            quadratic_is_zero,
        },
        matches: cmp.discrepancies.is_empty(),
        discrepancies: cmp.discrepancies,
    })
}
