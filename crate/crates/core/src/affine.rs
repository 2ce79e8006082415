//! Curves of degree `q + 1` through every point of the affine plane
//! `{z ≠ 0}`.
//!
//! Each is `G_M = (x^q − xz^{q−1}, y^q − yz^{q−1}) M (x, y, z)ᵗ` for a
//! nonzero 2×3 matrix `M = (M' | m)`. Transformations fixing the line
//! `z = 0` act on `M` by `N = ᵗB·M·(B b; 0 λ)`, and the orbit of `M` is
//! decided by the root pattern of the binary quadratic
//! `g_{M'}(s, t) = (s, t) M' (s, t)ᵗ`, by `det M'`, and by `rank M`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Line, P1Point, ProjPoint};
use crate::gf::{Elem, Field};
use crate::homog::{Exponents, HomogPoly};
use crate::matrix::{Matrix, Matrix2, Matrix23, Matrix3};
use crate::plane::{Concurrency, ResidualKind, ResidualPlan};
use crate::poly::{BinaryQuadratic, QuadShape};

/// The left 2×2 block `M'`.
pub fn left_block(m: &Matrix23) -> Matrix2 {
    Matrix([[m.get(0, 0), m.get(0, 1)], [m.get(1, 0), m.get(1, 1)]])
}

/// The third column `m`.
pub fn last_column(m: &Matrix23) -> [Elem; 2] {
    [m.get(0, 2), m.get(1, 2)]
}

pub fn build_gm(field: &Field, m: &Matrix23) -> Result<HomogPoly> {
    if m.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let q = field.q() as u16;
    let m1 = field.neg(Elem::ONE);
    // row i pairs with x_i^q − x_i z^{q−1}, column j with x_j
    let mut terms: Vec<(Exponents, Elem)> = Vec::with_capacity(12);
    for i in 0..2 {
        let mut hi: Exponents = [0, 0, 0];
        hi[i] = q;
        let mut lo: Exponents = [0, 0, q - 1];
        lo[i] += 1;
        for j in 0..3 {
            let c = m.get(i, j);
            if c.is_zero() {
                continue;
            }
            let (mut a, mut b) = (hi, lo);
            a[j] += 1;
            b[j] += 1;
            terms.push((a, c));
            terms.push((b, field.mul(c, m1)));
        }
    }
    Ok(HomogPoly::from_terms(field, u32::from(q) + 1, terms))
}

pub fn g_quadratic(field: &Field, m: &Matrix23) -> BinaryQuadratic {
    BinaryQuadratic {
        a: m.get(0, 0),
        b: field.add(m.get(0, 1), m.get(1, 0)),
        c: m.get(1, 1),
    }
}

/// The substitution `(x, y, z)ᵗ = (B b; 0 λ)(x', y', z')ᵗ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BTransform {
    b: Matrix2,
    shift: [Elem; 2],
    lambda: Elem,
}

impl BTransform {
    pub fn new(field: &Field, b: Matrix2, shift: [Elem; 2], lambda: Elem) -> Result<BTransform> {
        if b.det(field).is_zero() || lambda.is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(BTransform { b, shift, lambda })
    }

    pub fn identity() -> BTransform {
        BTransform {
            b: Matrix2::identity(),
            shift: [Elem::ZERO; 2],
            lambda: Elem::ONE,
        }
    }

    fn linear(b: Matrix2) -> BTransform {
        BTransform {
            b,
            shift: [Elem::ZERO; 2],
            lambda: Elem::ONE,
        }
    }

    fn translation(shift: [Elem; 2]) -> BTransform {
        BTransform {
            b: Matrix2::identity(),
            shift,
            lambda: Elem::ONE,
        }
    }

    pub fn block(&self) -> Matrix2 {
        self.b
    }

    pub fn shift(&self) -> [Elem; 2] {
        self.shift
    }

    pub fn lambda(&self) -> Elem {
        self.lambda
    }

    pub fn matrix(&self) -> Matrix3 {
        let (b, s) = (self.b, self.shift);
        Matrix([
            [b.get(0, 0), b.get(0, 1), s[0]],
            [b.get(1, 0), b.get(1, 1), s[1]],
            [Elem::ZERO, Elem::ZERO, self.lambda],
        ])
    }

    /// Block product `self · other`: substitute `self` first, then `other`.
    pub fn compose(&self, field: &Field, other: &BTransform) -> BTransform {
        let f = field;
        let b = self.b.mul(f, &other.b);
        let bs = self.b.mul_vec(f, &other.shift);
        let shift = [
            f.add(bs[0], f.mul(self.shift[0], other.lambda)),
            f.add(bs[1], f.mul(self.shift[1], other.lambda)),
        ];
        BTransform {
            b,
            shift,
            lambda: f.mul(self.lambda, other.lambda),
        }
    }

    pub fn inverse(&self, field: &Field) -> BTransform {
        let f = field;
        let b_inv = self.b.inverse(f).expect("B is invertible");
        let l_inv = f.inv_nz(self.lambda);
        let s = b_inv.mul_vec(f, &self.shift);
        BTransform {
            b: b_inv,
            shift: [f.neg(f.mul(s[0], l_inv)), f.neg(f.mul(s[1], l_inv))],
            lambda: l_inv,
        }
    }
}

impl Serialize for BTransform {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("BTransform", 3)?;
        st.serialize_field("B", &self.b)?;
        st.serialize_field("b", &self.shift)?;
        st.serialize_field("lambda", &self.lambda)?;
        st.end()
    }
}

/// `N = ᵗB·M·(B b; 0 λ)`, so that `G_M` composed with the substitution
/// is exactly `G_N`.
pub fn apply_transform(field: &Field, m: &Matrix23, sigma: &BTransform) -> Matrix23 {
    sigma.b.transpose().mul(field, m).mul(field, &sigma.matrix())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum AffineTag {
    #[serde(rename = "filling")]
    Filling,
    #[serde(rename = "I-1")]
    I1,
    #[serde(rename = "I-2")]
    I2,
    #[serde(rename = "I-3")]
    I3,
    #[serde(rename = "II-1")]
    II1,
    #[serde(rename = "II-2")]
    II2,
    #[serde(rename = "II-3")]
    II3,
    #[serde(rename = "III-1")]
    III1,
    #[serde(rename = "III-3")]
    III3,
}

impl AffineTag {
    pub const ALL: [AffineTag; 9] = [
        AffineTag::Filling,
        AffineTag::I1,
        AffineTag::I2,
        AffineTag::I3,
        AffineTag::II1,
        AffineTag::II2,
        AffineTag::II3,
        AffineTag::III1,
        AffineTag::III3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AffineTag::Filling => "filling",
            AffineTag::I1 => "I-1",
            AffineTag::I2 => "I-2",
            AffineTag::I3 => "I-3",
            AffineTag::II1 => "II-1",
            AffineTag::II2 => "II-2",
            AffineTag::II3 => "II-3",
            AffineTag::III1 => "III-1",
            AffineTag::III3 => "III-3",
        }
    }

    /// Rational points of the curve on `z = 0`.
    pub fn points_at_infinity(self, q: u32) -> usize {
        match self {
            AffineTag::Filling => 0,
            AffineTag::I1 | AffineTag::I2 | AffineTag::I3 => 2,
            AffineTag::II1 | AffineTag::II2 | AffineTag::II3 => 1,
            AffineTag::III1 | AffineTag::III3 => q as usize + 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AffineLabel {
    pub tag: AffineTag,
    pub canonical: Matrix23,
    pub witness: BTransform,
}

/// Tag from the invariants alone; no reduction is performed.
pub fn affine_tag(field: &Field, m: &Matrix23) -> Result<AffineTag> {
    if m.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let shape = g_quadratic(field, m).shape(field);
    let det_zero = left_block(m).det(field).is_zero();
    let rank = m.rank(field);
    let suffix = match (det_zero, rank) {
        (false, _) => 1,
        (true, 2) => 2,
        _ => 3,
    };
    use AffineTag::*;
    Ok(match (shape, suffix) {
        (QuadShape::Irreducible, _) => Filling,
        (QuadShape::TwoDistinctRoots(_), 1) => I1,
        (QuadShape::TwoDistinctRoots(_), 2) => I2,
        (QuadShape::TwoDistinctRoots(_), _) => I3,
        (QuadShape::DoubleRoot(_), 1) => II1,
        (QuadShape::DoubleRoot(_), 2) => II2,
        (QuadShape::DoubleRoot(_), _) => II3,
        (QuadShape::ZeroPolynomial, 1) => III1,
        (QuadShape::ZeroPolynomial, 2) => {
            return Err(Error::Internal(format!(
                "g_M' vanishes, det M' = 0 and rank M = 2 for {m:?}"
            )))
        }
        (QuadShape::ZeroPolynomial, _) => III3,
    })
}

pub fn classify_affine(field: &Field, m: &Matrix23) -> Result<AffineLabel> {
    let tag = affine_tag(field, m)?;
    let (canonical, witness) = if tag == AffineTag::Filling {
        // det M' ≠ 0 here, so the translation clears m
        let sigma = clearing_translation(field, m, Matrix2::identity())?;
        (apply_transform(field, m, &sigma), sigma)
    } else {
        reduce_to_canonical(field, m)?
    };
    Ok(AffineLabel {
        tag,
        canonical,
        witness,
    })
}

fn columns(c0: P1Point, c1: P1Point) -> Matrix2 {
    let [a, b] = c0.coords();
    let [c, d] = c1.coords();
    Matrix([[a, c], [b, d]])
}

/// Extends `base` by the translation making the third column vanish; needs
/// `det M' ≠ 0`.
fn clearing_translation(field: &Field, m: &Matrix23, block: Matrix2) -> Result<BTransform> {
    let f = field;
    let inv = left_block(m).inverse(f)?;
    let col = last_column(m);
    // n = ᵗB(M'b + m) vanishes once M'b = −m, whatever B is
    let shift = inv.mul_vec(f, &[f.neg(col[0]), f.neg(col[1])]);
    Ok(BTransform {
        b: block,
        shift,
        lambda: Elem::ONE,
    })
}

/// Constructive reduction of a degenerate `M` to its canonical shape.
///
/// Returns `(N, σ)` with `apply_transform(M, σ) = N` exactly.
pub fn reduce_to_canonical(field: &Field, m: &Matrix23) -> Result<(Matrix23, BTransform)> {
    let f = field;
    let tag = affine_tag(f, m)?;
    let g = g_quadratic(f, m);
    let apply_chain = |chain: &[BTransform]| {
        let sigma = chain
            .iter()
            .fold(BTransform::identity(), |acc, s| acc.compose(f, s));
        (apply_transform(f, m, &sigma), sigma)
    };
    let result = match (tag, g.shape(f)) {
        (AffineTag::Filling, _) => return Err(Error::IrreducibleQuadratic),
        (AffineTag::I1, QuadShape::TwoDistinctRoots([r1, r2])) => {
            let sigma = clearing_translation(f, m, columns(r1, r2))?;
            (apply_transform(f, m, &sigma), sigma)
        }
        (AffineTag::I2 | AffineTag::I3, QuadShape::TwoDistinctRoots([r1, r2])) => {
            let s1 = BTransform::linear(columns(r1, r2));
            let n1 = apply_transform(f, m, &s1);
            // N1' is (0 a1; b0 0) with exactly one of a1, b0 nonzero
            let mut chain = vec![s1];
            let n2 = if n1.get(0, 1).is_zero() {
                let swap = BTransform::linear(Matrix([[Elem::ZERO, Elem::ONE], [Elem::ONE, Elem::ZERO]]));
                chain.push(swap);
                apply_transform(f, &n1, &swap)
            } else {
                n1
            };
            let shear = f.neg(f.mul(n2.get(0, 2), f.inv_nz(n2.get(0, 1))));
            chain.push(BTransform::translation([Elem::ZERO, shear]));
            apply_chain(&chain)
        }
        (AffineTag::II1, QuadShape::DoubleRoot(r)) => {
            let sigma = clearing_translation(f, m, columns(complement(f, r), r))?;
            (apply_transform(f, m, &sigma), sigma)
        }
        (AffineTag::II2 | AffineTag::II3, QuadShape::DoubleRoot(r)) => {
            let s1 = BTransform::linear(columns(complement(f, r), r));
            let n1 = apply_transform(f, m, &s1);
            // N1' is (a0 0; 0 0)
            let shift = f.neg(f.mul(n1.get(0, 2), f.inv_nz(n1.get(0, 0))));
            apply_chain(&[s1, BTransform::translation([shift, Elem::ZERO])])
        }
        (AffineTag::III1, QuadShape::ZeroPolynomial) => {
            let sigma = clearing_translation(f, m, Matrix2::identity())?;
            (apply_transform(f, m, &sigma), sigma)
        }
        (AffineTag::III3, QuadShape::ZeroPolynomial) => {
            // M' = 0; pick ᵗB = R with R·m = e1
            let [a2, b2] = last_column(m);
            let r = if !a2.is_zero() {
                let ia = f.inv_nz(a2);
                Matrix([[ia, Elem::ZERO], [f.neg(f.mul(b2, ia)), Elem::ONE]])
            } else {
                Matrix([[Elem::ZERO, f.inv_nz(b2)], [Elem::ONE, Elem::ZERO]])
            };
            apply_chain(&[BTransform::linear(r.transpose())])
        }
        _ => return Err(Error::Internal(format!("tag and root shape disagree for {m:?}"))),
    };
    if !has_canonical_shape(f, tag, &result.0) {
        return Err(Error::Internal(format!(
            "reduction of {m:?} ended at {:?}, not a {} shape",
            result.0,
            tag.as_str()
        )));
    }
    Ok(result)
}

/// First point of P¹ in enumeration order other than `r`.
fn complement(field: &Field, r: P1Point) -> P1Point {
    P1Point::enumerate(field)
        .find(|c| *c != r)
        .expect("P¹ has at least three points")
}

/// Zero pattern of the canonical matrices, with the listed entries nonzero.
pub fn has_canonical_shape(field: &Field, tag: AffineTag, n: &Matrix23) -> bool {
    let at = |i, j| n.get(i, j);
    let zero = |cells: &[(usize, usize)]| cells.iter().all(|&(i, j)| at(i, j).is_zero());
    let skew = at(1, 0) == field.neg(at(0, 1));
    match tag {
        AffineTag::Filling => zero(&[(0, 2), (1, 2)]),
        AffineTag::I1 => !at(0, 1).is_zero() && !at(1, 0).is_zero() && zero(&[(0, 0), (1, 1), (0, 2), (1, 2)]),
        AffineTag::I2 => !at(0, 1).is_zero() && !at(1, 2).is_zero() && zero(&[(0, 0), (1, 0), (1, 1), (0, 2)]),
        AffineTag::I3 => !at(0, 1).is_zero() && zero(&[(0, 0), (1, 0), (1, 1), (0, 2), (1, 2)]),
        AffineTag::II1 => !at(0, 0).is_zero() && !at(0, 1).is_zero() && skew && zero(&[(1, 1), (0, 2), (1, 2)]),
        AffineTag::II2 => !at(0, 0).is_zero() && !at(1, 2).is_zero() && zero(&[(0, 1), (1, 0), (1, 1), (0, 2)]),
        AffineTag::II3 => !at(0, 0).is_zero() && zero(&[(0, 1), (1, 0), (1, 1), (0, 2), (1, 2)]),
        AffineTag::III1 => !at(0, 1).is_zero() && skew && zero(&[(0, 0), (1, 1), (0, 2), (1, 2)]),
        AffineTag::III3 => at(0, 2) == Elem::ONE && zero(&[(0, 0), (0, 1), (1, 0), (1, 1), (1, 2)]),
    }
}

/// `V_M ∩ {z = 0}`: the points `(s:t:0)` with `g_{M'}(s, t) = 0`.
pub fn points_at_infinity(field: &Field, m: &Matrix23) -> Result<Vec<ProjPoint>> {
    if m.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    Ok(g_quadratic(field, m)
        .projective_roots(field)
        .into_iter()
        .map(|r| {
            let [s, t] = r.coords();
            ProjPoint::new(field, [s, t, Elem::ZERO]).expect("nonzero root")
        })
        .collect())
}

/// Predicted components of `G_N` for a canonical `N`, in the coordinates
/// of `N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffinePlan {
    pub tag: AffineTag,
    pub lines: Vec<(Line, u32)>,
    pub residual: Option<ResidualPlan>,
    pub concurrency: Concurrency,
    pub points_at_infinity: usize,
}

impl AffinePlan {
    pub fn total_degree(&self) -> u32 {
        self.lines.iter().map(|(_, m)| m).sum::<u32>() + self.residual.as_ref().map_or(0, |r| r.degree)
    }
}

pub fn canonical_plan(field: &Field, label: &AffineLabel) -> Result<AffinePlan> {
    let f = field;
    let n = &label.canonical;
    if !has_canonical_shape(f, label.tag, n) {
        return Err(Error::Internal(format!("{n:?} is not a {} matrix", label.tag.as_str())));
    }
    let q = f.q() as u16;
    let qn = f.q() as usize;
    let (o, z) = (Elem::ONE, Elem::ZERO);
    let line = |c: [Elem; 3]| Line::new(f, c).expect("nonzero line");
    let (lx, ly, lz) = (line([o, z, z]), line([z, o, z]), line([z, z, o]));
    let poly = |deg: u16, terms: Vec<(Exponents, Elem)>| HomogPoly::from_terms(f, u32::from(deg), terms);
    // x − λz for λ ≠ 0
    let pencil_xz = || f.nonzero_elements().map(move |l| (line([o, z, f.neg(l)]), 1));
    let conc = |distinct_lines, max_through_point| Concurrency {
        distinct_lines,
        max_through_point,
    };
    let (a0, a1, b0, b2) = (n.get(0, 0), n.get(0, 1), n.get(1, 0), n.get(1, 2));
    let (lines, residual, concurrency): (Vec<(Line, u32)>, _, _) = match label.tag {
        AffineTag::Filling => (
            vec![],
            Some(ResidualPlan::new(build_gm(f, n)?, ResidualKind::AffineFilling)),
            conc(0, 0),
        ),
        AffineTag::I1 => {
            // xy·(a1 x^{q−1} + b0 y^{q−1} − (a1 + b0) z^{q−1})
            let g = poly(
                q - 1,
                vec![([q - 1, 0, 0], a1), ([0, q - 1, 0], b0), ([0, 0, q - 1], f.neg(f.add(a1, b0)))],
            );
            (
                vec![(lx, 1), (ly, 1)],
                Some(ResidualPlan::new(g, ResidualKind::MaximalQMinus1)),
                conc(2, 2),
            )
        }
        AffineTag::I2 => {
            // y·(a1(x^q − xz^{q−1}) + b2(y^{q−1}z − z^q))
            let g = poly(
                q,
                vec![([q, 0, 0], a1), ([1, 0, q - 1], f.neg(a1)), ([0, q - 1, 1], b2), ([0, 0, q], f.neg(b2))],
            );
            (vec![(ly, 1)], Some(ResidualPlan::new(g, ResidualKind::MaximalQ)), conc(1, 1))
        }
        AffineTag::I3 => {
            // a1·y·x·Π(x − λz)
            let mut lines = vec![(ly, 1), (lx, 1)];
            lines.extend(pencil_xz());
            (lines, None, conc(qn + 1, qn))
        }
        AffineTag::II1 => {
            // x·(a0 x^q − a0 x z^{q−1} + a1 x^{q−1} y − a1 y^q)
            let g = poly(
                q,
                vec![([q, 0, 0], a0), ([1, 0, q - 1], f.neg(a0)), ([q - 1, 1, 0], a1), ([0, q, 0], f.neg(a1))],
            );
            (vec![(lx, 1)], Some(ResidualPlan::new(g, ResidualKind::MaximalQ)), conc(1, 1))
        }
        AffineTag::II2 => {
            // a0(x^{q+1} − x²z^{q−1}) + b2(y^q z − y z^q)
            let g = poly(
                q + 1,
                vec![([q + 1, 0, 0], a0), ([2, 0, q - 1], f.neg(a0)), ([0, q, 1], b2), ([0, 1, q], f.neg(b2))],
            );
            (vec![], Some(ResidualPlan::new(g, ResidualKind::MaximalQPlus1)), conc(0, 0))
        }
        AffineTag::II3 => {
            // a0·x²·Π(x − λz)
            let mut lines = vec![(lx, 2)];
            lines.extend(pencil_xz());
            (lines, None, conc(qn, qn))
        }
        AffineTag::III1 => {
            // a1(x^q y − x y^q): x, y and x − λy
            let mut lines = vec![(lx, 1), (ly, 1)];
            lines.extend(f.nonzero_elements().map(|l| (line([o, f.neg(l), z]), 1)));
            (lines, None, conc(qn + 1, qn + 1))
        }
        AffineTag::III3 => {
            // z·x·Π(x − λz)
            let mut lines = vec![(lz, 1), (lx, 1)];
            lines.extend(pencil_xz());
            (lines, None, conc(qn + 1, qn + 1))
        }
    };
    Ok(AffinePlan {
        tag: label.tag,
        lines,
        residual,
        concurrency,
        points_at_infinity: label.tag.points_at_infinity(f.q()),
    })
}
