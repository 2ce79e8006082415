//! Plane-filling curves of degree `q + 2`.
//!
//! Every such curve is `F_A = (x, y, z) A (U, V, W)ᵗ = 0` for a 3×3 matrix
//! `A`, where `U = y^q z − y z^q`, `V = z^q x − z x^q`, `W = x^q y − x y^q`
//! generate the ideal of P²(F_q). The similarity class of `A`, read off
//! its characteristic and minimal polynomials, determines how the curve
//! splits into rational lines and one residual component.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Line;
use crate::gf::{Elem, Field};
use crate::homog::{Exponents, HomogPoly};
use crate::matrix::Matrix3;
use crate::poly::{CubicShape, UniPoly};

/// The generators `(U, V, W)`, each of degree `q + 1`.
pub fn build_uvw(field: &Field) -> [HomogPoly; 3] {
    let q = field.q() as u16;
    let one = Elem::ONE;
    let m1 = field.neg(one);
    let gen = |a: Exponents, b: Exponents| {
        HomogPoly::from_terms(field, u32::from(q) + 1, [(a, one), (b, m1)])
    };
    [
        gen([0, q, 1], [0, 1, q]),
        gen([1, 0, q], [q, 0, 1]),
        gen([q, 1, 0], [1, q, 0]),
    ]
}

/// `F_A`, of nominal degree `q + 2`; the zero polynomial exactly when `A`
/// is scalar.
pub fn build_fa(field: &Field, a: &Matrix3) -> HomogPoly {
    let q = field.q() as u16;
    let m1 = field.neg(Elem::ONE);
    // U, V, W as (positive monomial, negative monomial) pairs
    let gens: [(Exponents, Exponents); 3] = [
        ([0, q, 1], [0, 1, q]),
        ([1, 0, q], [q, 0, 1]),
        ([q, 1, 0], [1, q, 0]),
    ];
    let mut terms = Vec::with_capacity(18);
    for (i, row) in a.rows().iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (pos, neg) = gens[j];
            let mut p = pos;
            let mut n = neg;
            p[i] += 1;
            n[i] += 1;
            terms.push((p, c));
            terms.push((n, field.mul(c, m1)));
        }
    }
    HomogPoly::from_terms(field, u32::from(q) + 2, terms)
}

/// `|tE − A|`.
pub fn charpoly(field: &Field, a: &Matrix3) -> UniPoly {
    let f = field;
    let m = |i: usize, j: usize| a.get(i, j);
    let minor = |i: usize, j: usize| f.sub(f.mul(m(i, i), m(j, j)), f.mul(m(i, j), m(j, i)));
    let c2 = f.add(f.add(minor(0, 1), minor(0, 2)), minor(1, 2));
    UniPoly::new(
        f,
        vec![f.neg(a.det(f)), c2, f.neg(a.trace(f)), Elem::ONE],
    )
}

/// Monic minimal polynomial, found by testing degrees 1, 2, 3 in turn.
pub fn minpoly(field: &Field, a: &Matrix3) -> UniPoly {
    let f = field;
    if a.is_scalar() {
        return UniPoly::linear(f, a.get(0, 0));
    }
    // A is not scalar, so E and A are independent and A² = c1·A + c0·E
    // pins c1 from any position where A differs from a multiple of E.
    let sq = a.mul(f, a);
    let c1 = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .find(|&(i, j)| i != j && !a.get(i, j).is_zero())
        .map(|(i, j)| f.mul(sq.get(i, j), f.inv_nz(a.get(i, j))))
        .or_else(|| {
            let (i, j) = [(0, 1), (0, 2), (1, 2)]
                .into_iter()
                .find(|&(i, j)| a.get(i, i) != a.get(j, j))?;
            let num = f.sub(sq.get(i, i), sq.get(j, j));
            let den = f.sub(a.get(i, i), a.get(j, j));
            Some(f.mul(num, f.inv_nz(den)))
        })
        .expect("a non-scalar matrix has an off-diagonal entry or distinct diagonal entries");
    let c0 = f.sub(sq.get(0, 0), f.mul(c1, a.get(0, 0)));
    let combo = a.scale(f, c1).add(f, &Matrix3::scalar(f, c0));
    if combo == sq {
        UniPoly::new(f, vec![f.neg(c0), f.neg(c1), Elem::ONE])
    } else {
        charpoly(f, a)
    }
}

/// The similarity case of `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CaseLabel {
    /// Irreducible characteristic polynomial.
    Nonsingular { charpoly: UniPoly },
    /// `f_A = (t − α) g(t)` with `g` irreducible.
    Case1 { alpha: Elem, quad: UniPoly },
    /// Three distinct eigenvalues in element order.
    Case2 { roots: [Elem; 3] },
    /// `f_A = (t − α)²(t − β)`, minimal polynomial `f_A`.
    Case3_1 { alpha: Elem, beta: Elem },
    /// `f_A = (t − α)²(t − β)`, minimal polynomial `(t − α)(t − β)`.
    Case3_2 { alpha: Elem, beta: Elem },
    /// `f_A = (t − α)³ = m_A`.
    Case4_1 { alpha: Elem },
    /// `m_A = (t − α)²`.
    Case4_2 { alpha: Elem },
    /// `A = αE`.
    Case4_3 { alpha: Elem },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CaseTag {
    #[serde(rename = "nonsingular")]
    Nonsingular,
    #[serde(rename = "1")]
    Case1,
    #[serde(rename = "2")]
    Case2,
    #[serde(rename = "3.1")]
    Case3_1,
    #[serde(rename = "3.2")]
    Case3_2,
    #[serde(rename = "4.1")]
    Case4_1,
    #[serde(rename = "4.2")]
    Case4_2,
    #[serde(rename = "4.3")]
    Case4_3,
}

impl CaseTag {
    pub const ALL: [CaseTag; 8] = [
        CaseTag::Nonsingular,
        CaseTag::Case1,
        CaseTag::Case2,
        CaseTag::Case3_1,
        CaseTag::Case3_2,
        CaseTag::Case4_1,
        CaseTag::Case4_2,
        CaseTag::Case4_3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::Nonsingular => "nonsingular",
            CaseTag::Case1 => "1",
            CaseTag::Case2 => "2",
            CaseTag::Case3_1 => "3.1",
            CaseTag::Case3_2 => "3.2",
            CaseTag::Case4_1 => "4.1",
            CaseTag::Case4_2 => "4.2",
            CaseTag::Case4_3 => "4.3",
        }
    }
}

impl CaseLabel {
    pub fn tag(&self) -> CaseTag {
        match self {
            CaseLabel::Nonsingular { .. } => CaseTag::Nonsingular,
            CaseLabel::Case1 { .. } => CaseTag::Case1,
            CaseLabel::Case2 { .. } => CaseTag::Case2,
            CaseLabel::Case3_1 { .. } => CaseTag::Case3_1,
            CaseLabel::Case3_2 { .. } => CaseTag::Case3_2,
            CaseLabel::Case4_1 { .. } => CaseTag::Case4_1,
            CaseLabel::Case4_2 { .. } => CaseTag::Case4_2,
            CaseLabel::Case4_3 { .. } => CaseTag::Case4_3,
        }
    }
}

/// Case from the characteristic polynomial's shape and the degree of the
/// minimal polynomial.
pub fn classify(field: &Field, a: &Matrix3) -> CaseLabel {
    let f = charpoly(field, a);
    let shape = f.cubic_shape().expect("characteristic polynomial is a monic cubic");
    let min_deg = || minpoly(field, a).degree().expect("minimal polynomial is nonzero");
    match shape {
        CubicShape::Irreducible => CaseLabel::Nonsingular { charpoly: f },
        CubicShape::LinearTimesIrredQuadratic { root, quad } => CaseLabel::Case1 { alpha: root, quad },
        CubicShape::ThreeDistinctRoots(roots) => CaseLabel::Case2 { roots },
        CubicShape::DoubleRootPlusSimple { double, simple } => match min_deg() {
            3 => CaseLabel::Case3_1 { alpha: double, beta: simple },
            _ => CaseLabel::Case3_2 { alpha: double, beta: simple },
        },
        CubicShape::TripleRoot(alpha) => match min_deg() {
            3 => CaseLabel::Case4_1 { alpha },
            2 => CaseLabel::Case4_2 { alpha },
            _ => CaseLabel::Case4_3 { alpha },
        },
    }
}

/// The case-canonical matrix of a label.
///
/// Companion-type blocks carry the ones below the diagonal, Jordan-type
/// blocks above it; eigenvalues appear in element order.
pub fn canonical_matrix(field: &Field, label: &CaseLabel) -> Matrix3 {
    let f = field;
    let (o, z) = (Elem::ONE, Elem::ZERO);
    match *label {
        CaseLabel::Nonsingular { ref charpoly } => {
            let c = |i| f.neg(charpoly.coeff(i));
            Matrix3::from_columns([[z, o, z], [z, z, o], [c(0), c(1), c(2)]])
        }
        CaseLabel::Case1 { alpha, ref quad } => {
            // g = t² − b t − a
            let a = f.neg(quad.coeff(0));
            let b = f.neg(quad.coeff(1));
            crate::matrix::Matrix([[z, a, z], [o, b, z], [z, z, alpha]])
        }
        CaseLabel::Case2 { roots } => Matrix3::diagonal(roots),
        CaseLabel::Case3_1 { alpha, beta } => crate::matrix::Matrix([[alpha, o, z], [z, alpha, z], [z, z, beta]]),
        CaseLabel::Case3_2 { alpha, beta } => Matrix3::diagonal([alpha, alpha, beta]),
        CaseLabel::Case4_1 { alpha } => crate::matrix::Matrix([[alpha, o, z], [z, alpha, o], [z, z, alpha]]),
        CaseLabel::Case4_2 { alpha } => crate::matrix::Matrix([[alpha, o, z], [z, alpha, z], [z, z, alpha]]),
        CaseLabel::Case4_3 { alpha } => Matrix3::scalar(f, alpha),
    }
}

/// Returns `(C, S)` with `S·A·S⁻¹ = C`, `C` the canonical matrix of
/// `classify(A)`. The columns of `S⁻¹` are built from eigenvectors and
/// cyclic vectors of `A`.
pub fn rcf_similarity(field: &Field, a: &Matrix3) -> Result<(Matrix3, Matrix3)> {
    let label = classify(field, a);
    rcf_similarity_for(field, a, &label)
}

fn rcf_similarity_for(field: &Field, a: &Matrix3, label: &CaseLabel) -> Result<(Matrix3, Matrix3)> {
    let f = field;
    let canonical = canonical_matrix(f, label);
    let shifted = |s: Elem| a.sub(f, &Matrix3::scalar(f, s));
    let eigvec = |s: Elem| -> Result<[Elem; 3]> {
        shifted(s)
            .nullspace(f)
            .first()
            .copied()
            .ok_or_else(|| Error::Internal(format!("{s} is not an eigenvalue of {a:?}")))
    };
    let unit = |k: usize| {
        let mut v = [Elem::ZERO; 3];
        v[k] = Elem::ONE;
        v
    };
    let image = |m: &Matrix3, v: [Elem; 3]| m.mul_vec(f, &v);
    let nonzero = |v: &[Elem; 3]| v.iter().any(|c| !c.is_zero());

    let cols: [[Elem; 3]; 3] = match *label {
        CaseLabel::Nonsingular { .. } => {
            let p1 = unit(0);
            let p2 = image(a, p1);
            [p1, p2, image(a, p2)]
        }
        CaseLabel::Case1 { alpha, ref quad } => {
            let g_of_a = a
                .mul(f, a)
                .add(f, &a.scale(f, quad.coeff(1)))
                .add(f, &Matrix3::scalar(f, quad.coeff(0)));
            let p1 = *g_of_a
                .nullspace(f)
                .first()
                .ok_or_else(|| Error::Internal("g(A) is invertible".into()))?;
            [p1, image(a, p1), eigvec(alpha)?]
        }
        CaseLabel::Case2 { roots } => [eigvec(roots[0])?, eigvec(roots[1])?, eigvec(roots[2])?],
        CaseLabel::Case3_1 { alpha, beta } => {
            let n = shifted(alpha);
            let n2 = n.mul(f, &n);
            let p2 = n2
                .nullspace(f)
                .into_iter()
                .find(|v| nonzero(&image(&n, *v)))
                .ok_or_else(|| Error::Internal("no generalized eigenvector".into()))?;
            [image(&n, p2), p2, eigvec(beta)?]
        }
        CaseLabel::Case3_2 { alpha, beta } => {
            let ker = shifted(alpha).nullspace(f);
            if ker.len() != 2 {
                return Err(Error::Internal("eigenspace is not a plane".into()));
            }
            [ker[0], ker[1], eigvec(beta)?]
        }
        CaseLabel::Case4_1 { alpha } => {
            let n = shifted(alpha);
            let n2 = n.mul(f, &n);
            let p3 = (0..3)
                .map(unit)
                .find(|v| nonzero(&image(&n2, *v)))
                .ok_or_else(|| Error::Internal("(A − α)² vanishes".into()))?;
            let p2 = image(&n, p3);
            [image(&n, p2), p2, p3]
        }
        CaseLabel::Case4_2 { alpha } => {
            let n = shifted(alpha);
            let p2 = (0..3)
                .map(unit)
                .find(|v| nonzero(&image(&n, *v)))
                .ok_or_else(|| Error::Internal("A − α vanishes".into()))?;
            let p1 = image(&n, p2);
            let p3 = n
                .nullspace(f)
                .into_iter()
                .find(|v| !Matrix3::from_columns([p1, p2, *v]).det(f).is_zero())
                .ok_or_else(|| Error::Internal("no complementary eigenvector".into()))?;
            [p1, p2, p3]
        }
        CaseLabel::Case4_3 { .. } => [unit(0), unit(1), unit(2)],
    };
    let p = Matrix3::from_columns(cols);
    let s = p.inverse(f)?;
    if s.mul(f, a).mul(f, &p) != canonical {
        return Err(Error::Internal(format!(
            "similarity check failed for {a:?} in case {}",
            label.tag().as_str()
        )));
    }
    Ok((canonical, s))
}

/// What remains after the rational lines are divided out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ResidualKind {
    /// Degree `q + 1`, points exactly the affine plane.
    #[serde(rename = "affine-filling")]
    AffineFilling,
    /// Degree `q + 1` curve attaining `(d − 1)q + 1`.
    #[serde(rename = "maximal-q+1")]
    MaximalQPlus1,
    /// Degree `q`, maximal.
    #[serde(rename = "maximal-q")]
    MaximalQ,
    /// Degree `q − 1`, maximal: `αx^{q−1} + βy^{q−1} + γz^{q−1}` with
    /// `α + β + γ = 0`.
    #[serde(rename = "maximal-q-1")]
    MaximalQMinus1,
}

impl ResidualKind {
    /// Rational point count of a residual of this kind and degree `d`.
    pub fn expected_points(self, q: u64, degree: u32) -> u64 {
        match self {
            ResidualKind::AffineFilling => q * q,
            _ => (u64::from(degree) - 1) * q + 1,
        }
    }

    /// Singular rational points the residual is expected to carry.
    pub fn expected_singular_points(self) -> usize {
        match self {
            ResidualKind::AffineFilling => 1,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidualPlan {
    pub equation: HomogPoly,
    pub degree: u32,
    pub kind: ResidualKind,
    pub expected_points: u64,
}

impl ResidualPlan {
    pub fn new(equation: HomogPoly, kind: ResidualKind) -> ResidualPlan {
        let degree = equation.degree();
        let expected_points = kind.expected_points(u64::from(equation.field().q()), degree);
        ResidualPlan {
            equation,
            degree,
            kind,
            expected_points,
        }
    }
}

/// How a set of distinct lines meets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Concurrency {
    pub distinct_lines: usize,
    /// Largest number of the lines through one rational point.
    pub max_through_point: usize,
}

impl Concurrency {
    /// All lines (at least two) share a point.
    pub fn all_concurrent(&self) -> bool {
        self.distinct_lines >= 2 && self.max_through_point == self.distinct_lines
    }
}

/// Predicted splitting of `C_A`, in the canonical coordinates of `C`.
///
/// With `S·A·S⁻¹ = C` and `T = (ᵗS)⁻¹`, `F_A(x) = det S · F_C(T x)`, so
/// each canonical component `H` pulls back to `H(T x)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionPlan {
    pub case: CaseTag,
    pub canonical: Matrix3,
    pub similarity: Matrix3,
    pub lines: Vec<(Line, u32)>,
    pub residual: Option<ResidualPlan>,
    pub concurrency: Concurrency,
    pub zero_polynomial: bool,
}

impl DecompositionPlan {
    /// `T = (ᵗS)⁻¹`, taking original coordinates to canonical ones.
    pub fn pullback(&self, field: &Field) -> Matrix3 {
        self.similarity
            .transpose()
            .inverse(field)
            .expect("similarity transforms are invertible")
    }

    /// The predicted lines in the coordinates of `A`.
    pub fn pulled_back_lines(&self, field: &Field) -> Vec<(Line, u32)> {
        let t = self.pullback(field).transpose();
        let mut lines: Vec<(Line, u32)> = self
            .lines
            .iter()
            .map(|(l, m)| {
                let c = t.mul_vec(field, &l.coeffs());
                (Line::new(field, c).expect("invertible image of a line"), *m)
            })
            .collect();
        lines.sort();
        lines
    }

    /// The predicted residual in the coordinates of `A`.
    pub fn pulled_back_residual(&self, field: &Field) -> Option<HomogPoly> {
        let t = self.pullback(field);
        self.residual.as_ref().map(|r| r.equation.compose_linear(&t))
    }

    pub fn total_degree(&self) -> u32 {
        self.lines.iter().map(|(_, m)| m).sum::<u32>() + self.residual.as_ref().map_or(0, |r| r.degree)
    }
}

/// Canonical-coordinate decomposition per case. Fails on the nonsingular
/// case, which has no rational components.
pub fn predicted_decomposition(field: &Field, a: &Matrix3) -> Result<DecompositionPlan> {
    let label = classify(field, a);
    if let CaseLabel::Nonsingular { .. } = label {
        return Err(Error::NonsingularCase);
    }
    let (canonical, similarity) = rcf_similarity_for(field, a, &label)?;
    let f = field;
    let q = f.q() as u16;
    let qn = f.q() as usize;
    let (o, z) = (Elem::ONE, Elem::ZERO);
    let neg = |c: Elem| f.neg(c);
    let line = |c: [Elem; 3]| Line::new(f, c).expect("nonzero line");
    let (lx, ly, lz) = (line([o, z, z]), line([z, o, z]), line([z, z, o]));
    let poly = |deg: u16, terms: Vec<(Exponents, Elem)>| HomogPoly::from_terms(f, u32::from(deg), terms);

    let (lines, residual, concurrency) = match label {
        CaseLabel::Nonsingular { .. } => unreachable!(),
        CaseLabel::Case1 { alpha, ref quad } => {
            // F_C = z·G with G = y^{q+1} − y²z^{q−1} + (ax + by)(xz^{q−1} − x^q) + α(x^q y − x y^q)
            let a = neg(quad.coeff(0));
            let b = neg(quad.coeff(1));
            let g = poly(
                q + 1,
                vec![
                    ([0, q + 1, 0], o),
                    ([0, 2, q - 1], neg(o)),
                    ([2, 0, q - 1], a),
                    ([q + 1, 0, 0], neg(a)),
                    ([1, 1, q - 1], b),
                    ([q, 1, 0], f.sub(alpha, b)),
                    ([1, q, 0], neg(alpha)),
                ],
            );
            (
                vec![(lz, 1)],
                Some(ResidualPlan::new(g, ResidualKind::AffineFilling)),
                Concurrency { distinct_lines: 1, max_through_point: 1 },
            )
        }
        CaseLabel::Case2 { roots: [a1, a2, a3] } => {
            // F_C = xyz·((α3 − α2)x^{q−1} + (α1 − α3)y^{q−1} + (α2 − α1)z^{q−1})
            let g = poly(
                q - 1,
                vec![
                    ([q - 1, 0, 0], f.sub(a3, a2)),
                    ([0, q - 1, 0], f.sub(a1, a3)),
                    ([0, 0, q - 1], f.sub(a2, a1)),
                ],
            );
            (
                vec![(lx, 1), (ly, 1), (lz, 1)],
                Some(ResidualPlan::new(g, ResidualKind::MaximalQMinus1)),
                Concurrency { distinct_lines: 3, max_through_point: 2 },
            )
        }
        CaseLabel::Case3_1 { alpha, beta } => {
            // F_C = xz·(xz^{q−1} − x^q + β'(x^{q−1}y − y^q)), β' = β − α
            let bp = f.sub(beta, alpha);
            let h = poly(
                q,
                vec![
                    ([1, 0, q - 1], o),
                    ([q, 0, 0], neg(o)),
                    ([q - 1, 1, 0], bp),
                    ([0, q, 0], neg(bp)),
                ],
            );
            (
                vec![(lx, 1), (lz, 1)],
                Some(ResidualPlan::new(h, ResidualKind::MaximalQ)),
                Concurrency { distinct_lines: 2, max_through_point: 2 },
            )
        }
        CaseLabel::Case3_2 { .. } => {
            // F_C = β'·z·xy·Π_{λ≠0}(x − λy)
            let mut lines = vec![(lz, 1), (lx, 1), (ly, 1)];
            lines.extend(f.nonzero_elements().map(|l| (line([o, neg(l), z]), 1)));
            (lines, None, Concurrency { distinct_lines: qn + 2, max_through_point: qn + 1 })
        }
        CaseLabel::Case4_1 { .. } => {
            // F_C = x·(xz^q − x^q z + x^{q−1}y² − y^{q+1})
            let g = poly(
                q + 1,
                vec![
                    ([1, 0, q], o),
                    ([q, 0, 1], neg(o)),
                    ([q - 1, 2, 0], o),
                    ([0, q + 1, 0], neg(o)),
                ],
            );
            (
                vec![(lx, 1)],
                Some(ResidualPlan::new(g, ResidualKind::MaximalQPlus1)),
                Concurrency { distinct_lines: 1, max_through_point: 1 },
            )
        }
        CaseLabel::Case4_2 { .. } => {
            // F_C = x²·z·Π_{λ≠0}(z − λx)
            let mut lines = vec![(lx, 2), (lz, 1)];
            lines.extend(f.nonzero_elements().map(|l| (line([neg(l), z, o]), 1)));
            (lines, None, Concurrency { distinct_lines: qn + 1, max_through_point: qn + 1 })
        }
        CaseLabel::Case4_3 { .. } => {
            return Ok(DecompositionPlan {
                case: CaseTag::Case4_3,
                canonical,
                similarity,
                lines: Vec::new(),
                residual: None,
                concurrency: Concurrency { distinct_lines: 0, max_through_point: 0 },
                zero_polynomial: true,
            });
        }
    };
    Ok(DecompositionPlan {
        case: label.tag(),
        canonical,
        similarity,
        lines,
        residual,
        concurrency,
        zero_polynomial: false,
    })
}

/// Class of `A` under `A ↦ ρ·ᵗB A ᵗB⁻¹ + μE`, as the lexicographically
/// least `(ρ³ f_A((t−μ)/ρ), ρ^{deg m} m_A((t−μ)/ρ))` over all `ρ ≠ 0, μ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EquivKey {
    /// Scalar matrices, whose `F_A` vanishes identically.
    Scalar,
    Class { charpoly: UniPoly, minpoly: UniPoly },
}

impl Serialize for EquivKey {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        match self {
            EquivKey::Scalar => s.serialize_str("scalar"),
            EquivKey::Class { charpoly, minpoly } => {
                let mut st = s.serialize_struct("EquivKey", 2)?;
                st.serialize_field("charpoly", charpoly)?;
                st.serialize_field("minpoly", minpoly)?;
                st.end()
            }
        }
    }
}

pub fn equiv_key(field: &Field, a: &Matrix3) -> EquivKey {
    if a.is_scalar() {
        return EquivKey::Scalar;
    }
    equiv_key_from_polys(field, &charpoly(field, a), &minpoly(field, a))
}

pub(crate) fn equiv_key_from_polys(field: &Field, f: &UniPoly, m: &UniPoly) -> EquivKey {
    field
        .nonzero_elements()
        .flat_map(|rho| field.elements().map(move |mu| (rho, mu)))
        .map(|(rho, mu)| (f.affine_image(rho, mu), m.affine_image(rho, mu)))
        .min()
        .map(|(charpoly, minpoly)| EquivKey::Class { charpoly, minpoly })
        .expect("at least one (ρ, μ) pair")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;

    fn field(q: u64) -> Field {
        Field::from_order(q).unwrap()
    }

    fn m3(f: &Field, v: [i64; 9]) -> Matrix3 {
        let ints: Vec<u32> = v.iter().map(|&x| f.from_i64(x).to_int()).collect();
        Matrix3::from_ints(f, &ints).unwrap()
    }

    fn vars(f: &Field) -> [HomogPoly; 3] {
        [HomogPoly::var(f, 0), HomogPoly::var(f, 1), HomogPoly::var(f, 2)]
    }

    #[test]
    fn uvw_shapes() {
        let f2 = field(2);
        let [u, _, _] = build_uvw(&f2);
        // y²z + yz² once signs collapse in characteristic 2
        let want = HomogPoly::from_terms(&f2, 3, [([0, 2, 1], Elem::ONE), ([0, 1, 2], Elem::ONE)]);
        assert_eq!(u, want);
        for q in [2, 3, 4, 5] {
            let f = field(q);
            for g in build_uvw(&f) {
                assert_eq!(g.num_terms(), 2);
                assert_eq!(g.degree(), q as u32 + 1);
            }
            let [_, _, w] = build_uvw(&f);
            let swapped = w.linear_substitute(&m3(&f, [0, 1, 0, 1, 0, 0, 0, 0, 1])).unwrap();
            assert_eq!(swapped, -&w);
        }
    }

    #[test]
    fn fa_examples() {
        let f = field(5);
        assert!(build_fa(&f, &Matrix3::identity()).is_zero());
        let [x, y, z] = vars(&f);
        let q = 5;
        // A = E12: x(z^q x − z x^q)
        let e12 = m3(&f, [0, 1, 0, 0, 0, 0, 0, 0, 0]);
        let want = &x * &(&(&z.pow(q) * &x) - &(&z * &x.pow(q)));
        assert_eq!(build_fa(&f, &e12), want);
        // A = diag(0, 0, β'): β' z (x^q y − x y^q)
        let beta = f.from_i64(3);
        let d = Matrix3::diagonal([Elem::ZERO, Elem::ZERO, beta]);
        let want = (&z * &(&(&x.pow(q) * &y) - &(&x * &y.pow(q)))).scale(beta);
        assert_eq!(build_fa(&f, &d), want);
    }

    #[test]
    fn fa_agrees_with_generic_product() {
        for q in [2, 3, 4] {
            let f = field(q);
            let uvw = build_uvw(&f);
            let xyz = vars(&f);
            for idx in (0..Matrix3::count(&f)).step_by(4099) {
                let a = Matrix3::from_index(&f, idx);
                let mut acc = HomogPoly::zero(&f, q as u32 + 2);
                for i in 0..3 {
                    for j in 0..3 {
                        acc = &acc + &(&xyz[i] * &uvw[j]).scale(a.get(i, j));
                    }
                }
                assert_eq!(build_fa(&f, &a), acc);
            }
        }
    }

    #[test]
    fn charpoly_examples() {
        let f = field(7);
        let t3 = UniPoly::new(&f, vec![Elem::ZERO, Elem::ZERO, Elem::ZERO, Elem::ONE]);
        assert_eq!(charpoly(&f, &Matrix3::ZERO), t3);
        let e = |v| f.from_i64(v);
        let d = Matrix3::diagonal([e(1), e(2), e(5)]);
        assert_eq!(charpoly(&f, &d), UniPoly::from_roots(&f, &[e(1), e(2), e(5)]));
        // block (0 a; 1 b) ⊕ α gives (t − α)(t² − bt − a)
        let (a, b, alpha) = (e(3), e(1), e(4));
        let m = Matrix([[Elem::ZERO, a, Elem::ZERO], [Elem::ONE, b, Elem::ZERO], [Elem::ZERO, Elem::ZERO, alpha]]);
        let g = UniPoly::new(&f, vec![f.neg(a), f.neg(b), Elem::ONE]);
        assert_eq!(charpoly(&f, &m), UniPoly::linear(&f, alpha).mul(&g));
    }

    #[test]
    fn minpoly_examples() {
        let f = field(5);
        let alpha = f.from_i64(3);
        assert_eq!(minpoly(&f, &Matrix3::scalar(&f, alpha)), UniPoly::linear(&f, alpha));
        let j = m3(&f, [3, 1, 0, 0, 3, 0, 0, 0, 3]);
        let lin = UniPoly::linear(&f, alpha);
        assert_eq!(minpoly(&f, &j), lin.mul(&lin));
        let n = m3(&f, [0, 1, 0, 0, 0, 1, 0, 0, 0]);
        assert_eq!(minpoly(&f, &n), UniPoly::new(&f, vec![Elem::ZERO, Elem::ZERO, Elem::ZERO, Elem::ONE]));
    }

    /// Minimal polynomial by brute force: least-degree monic annihilator.
    fn minpoly_oracle(f: &Field, a: &Matrix3) -> UniPoly {
        let pows: Vec<Matrix3> = (0..=3).map(|k| a.pow(f, k)).collect();
        for deg in 1..=3usize {
            let q = f.q() as usize;
            for mut n in 0..q.pow(deg as u32) {
                let mut coeffs: Vec<Elem> = (0..deg)
                    .map(|_| {
                        let d = n % q;
                        n /= q;
                        f.elem(d as u32).unwrap()
                    })
                    .collect();
                coeffs.push(Elem::ONE);
                let val = coeffs
                    .iter()
                    .enumerate()
                    .fold(Matrix3::ZERO, |acc, (i, &c)| acc.add(f, &pows[i].scale(f, c)));
                if val.is_zero() {
                    return UniPoly::new(f, coeffs);
                }
            }
        }
        unreachable!("Cayley-Hamilton")
    }

    #[test]
    fn minpoly_matches_oracle() {
        for q in [2, 3] {
            let f = field(q);
            for idx in (0..Matrix3::count(&f)).step_by(7) {
                let a = Matrix3::from_index(&f, idx);
                let m = minpoly(&f, &a);
                assert_eq!(m, minpoly_oracle(&f, &a), "{a:?}");
                assert!(charpoly(&f, &a).rem(&m).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn classify_examples() {
        let f7 = field(7);
        assert_eq!(classify(&f7, &m3(&f7, [0, 0, 0, 0, 1, 0, 0, 0, 2])).tag(), CaseTag::Case2);
        assert_eq!(classify(&f7, &Matrix3::identity()).tag(), CaseTag::Case4_3);
        // companion of t³ − t − 1 over GF(3), irreducible
        let f3 = field(3);
        let comp = Matrix3::from_columns([
            [Elem::ZERO, Elem::ONE, Elem::ZERO],
            [Elem::ZERO, Elem::ZERO, Elem::ONE],
            [Elem::ONE, Elem::ONE, Elem::ZERO],
        ]);
        assert_eq!(classify(&f3, &comp).tag(), CaseTag::Nonsingular);
        assert_eq!(classify(&f3, &m3(&f3, [0, 1, 0, 0, 0, 1, 0, 0, 0])).tag(), CaseTag::Case4_1);
    }

    #[test]
    fn rcf_recovers_canonical_forms() {
        for q in [2, 3, 4] {
            let f = field(q);
            for idx in 0..Matrix3::count(&f) {
                let a = Matrix3::from_index(&f, idx);
                let (c, s) = rcf_similarity(&f, &a).unwrap();
                let s_inv = s.inverse(&f).unwrap();
                assert_eq!(s.mul(&f, &a).mul(&f, &s_inv), c);
                assert_eq!(c, canonical_matrix(&f, &classify(&f, &a)));
            }
        }
        let f = field(5);
        let d = Matrix3::diagonal([Elem::ZERO, f.from_i64(2), f.from_i64(4)]);
        assert_eq!(rcf_similarity(&f, &d).unwrap(), (d, Matrix3::identity()));
    }

    #[test]
    fn canonical_residual_products_rebuild_fa() {
        for q in [2, 3, 4, 5, 7] {
            let f = field(q);
            let mut seen = std::collections::HashSet::new();
            for idx in (0..Matrix3::count(&f)).step_by(if q <= 3 { 1 } else { 37 }) {
                let a = Matrix3::from_index(&f, idx);
                let Ok(plan) = predicted_decomposition(&f, &a) else { continue };
                if plan.zero_polynomial || !seen.insert(plan.canonical) {
                    continue;
                }
                let fc = build_fa(&f, &plan.canonical);
                let mut prod = plan
                    .residual
                    .as_ref()
                    .map_or(HomogPoly::constant(&f, Elem::ONE), |r| r.equation.clone());
                for (l, m) in &plan.lines {
                    prod = &prod * &l.to_poly(&f).pow(*m);
                }
                assert!(fc.scalar_ratio(&prod).is_some(), "case {:?} at q={q}", plan.case);
                assert_eq!(plan.total_degree(), q as u32 + 2);
            }
        }
    }

    #[test]
    fn pullback_relates_fa_to_canonical() {
        let f = field(3);
        for idx in (0..Matrix3::count(&f)).step_by(11) {
            let a = Matrix3::from_index(&f, idx);
            let (c, s) = rcf_similarity(&f, &a).unwrap();
            let t = s.transpose().inverse(&f).unwrap();
            let lhs = build_fa(&f, &a);
            let rhs = build_fa(&f, &c).compose_linear(&t).scale(s.det(&f));
            assert_eq!(lhs, rhs, "{a:?}");
        }
    }

    #[test]
    fn predicted_decomposition_refuses_nonsingular() {
        let f = field(2);
        // companion of t³ + t + 1
        let comp = Matrix3::from_columns([
            [Elem::ZERO, Elem::ONE, Elem::ZERO],
            [Elem::ZERO, Elem::ZERO, Elem::ONE],
            [Elem::ONE, Elem::ONE, Elem::ZERO],
        ]);
        assert_eq!(predicted_decomposition(&f, &comp).unwrap_err(), Error::NonsingularCase);
    }

    #[test]
    fn case2_residual_coefficients_sum_to_zero() {
        let f = field(7);
        let e = |v| f.from_i64(v);
        let plan = predicted_decomposition(&f, &Matrix3::diagonal([e(1), e(3), e(6)])).unwrap();
        let g = &plan.residual.unwrap().equation;
        let sum = g.terms().fold(Elem::ZERO, |acc, (_, c)| f.add(acc, c));
        assert_eq!(sum, Elem::ZERO);
        assert_eq!(g.coeff([6, 0, 0]), f.sub(e(6), e(3)));
        assert_eq!(g.coeff([0, 6, 0]), f.sub(e(1), e(6)));
        assert_eq!(g.coeff([0, 0, 6]), f.sub(e(3), e(1)));
    }

    #[test]
    fn case1_residual_is_an_affine_family_member() {
        // G = (x^q − xz^{q−1}, y^q − yz^{q−1}) (−a α−b 0; −α 1 0) (x y z)ᵗ
        for q in [2, 3, 4, 5] {
            let f = field(q);
            for idx in (0..Matrix3::count(&f)).step_by(53) {
                let a = Matrix3::from_index(&f, idx);
                let CaseLabel::Case1 { alpha, ref quad } = classify(&f, &a) else { continue };
                let plan = predicted_decomposition(&f, &a).unwrap();
                let (ca, cb) = (f.neg(quad.coeff(0)), f.neg(quad.coeff(1)));
                let m = crate::matrix::Matrix23::from_ints(&f, &[
                    f.neg(ca).to_int(), f.sub(alpha, cb).to_int(), 0,
                    f.neg(alpha).to_int(), 1, 0,
                ]).unwrap();
                assert_eq!(plan.residual.unwrap().equation, crate::affine::build_gm(&f, &m).unwrap());
            }
        }
    }

    #[test]
    fn case41_residual_maps_to_the_degree_q_plus_one_example() {
        // −G(−z, x, y) is x^{q+1} − x²z^{q−1} + y^q z − y z^q
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let f = field(q);
            let n = m3(&f, [0, 1, 0, 0, 0, 1, 0, 0, 0]);
            let g = predicted_decomposition(&f, &n).unwrap().residual.unwrap().equation;
            let sub = m3(&f, [0, 0, -1, 1, 0, 0, 0, 1, 0]);
            let image = -&g.linear_substitute(&sub).unwrap();
            let [x, y, z] = vars(&f);
            let qq = q as u32;
            let want = &(&(&x.pow(qq + 1) - &(&x.pow(2) * &z.pow(qq - 1))) + &(&y.pow(qq) * &z)) - &(&y * &z.pow(qq));
            assert_eq!(image, want, "q={q}");
        }
    }

    #[test]
    fn case31_residual_maps_to_the_degree_q_example() {
        // replacing β'y by y and −x by x gives −(x^q − xz^{q−1} + x^{q−1}y − y^q)
        for q in [2, 3, 4, 5, 7] {
            let f = field(q);
            let qq = q as u32;
            let [x, y, z] = vars(&f);
            let want = &(&(&x.pow(qq) - &(&x * &z.pow(qq - 1))) + &(&x.pow(qq - 1) * &y)) - &y.pow(qq);
            for beta in f.nonzero_elements() {
                let a = Matrix([[Elem::ZERO, Elem::ONE, Elem::ZERO], [Elem::ZERO; 3], [Elem::ZERO, Elem::ZERO, beta]]);
                let h = predicted_decomposition(&f, &a).unwrap().residual.unwrap().equation;
                // old x = −x', old y = y'/β'
                let sub = Matrix::diagonal([f.neg(Elem::ONE), f.inv(beta).unwrap(), Elem::ONE]);
                let image = h.linear_substitute(&sub).unwrap();
                assert!(image.scalar_ratio(&want).is_some(), "q={q} β'={beta}");
            }
        }
    }

    #[test]
    fn equiv_key_examples() {
        let f = field(5);
        assert_eq!(equiv_key(&f, &Matrix3::identity()), EquivKey::Scalar);
        assert_eq!(equiv_key(&f, &Matrix3::scalar(&f, f.from_i64(2))), EquivKey::Scalar);
        let e = |v| f.from_i64(v);
        for lambda in 2..5 {
            let base = equiv_key(&f, &Matrix3::diagonal([e(0), e(1), e(lambda)]));
            // any affine relabelling of the eigenvalues lands in the same class
            for rho in f.nonzero_elements() {
                for mu in f.elements() {
                    let m = |v: i64| f.add(f.mul(rho, e(v)), mu);
                    let d = Matrix3::diagonal([m(lambda), m(0), m(1)]);
                    assert_eq!(equiv_key(&f, &d), base);
                }
            }
        }
    }
}
