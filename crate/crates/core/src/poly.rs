//! Univariate polynomials over GF(q), with the factor-shape analysis of
//! cubics and binary quadratics.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::P1Point;
use crate::gf::{Elem, Field};

/// A polynomial in `t`; `coeffs[i]` is the coefficient of `t^i`.
///
/// Always normalized: the leading coefficient is nonzero, and the zero
/// polynomial has no coefficients at all.
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    field: Field,
    coeffs: Vec<Elem>,
}

impl UniPoly {
    pub fn new(field: &Field, mut coeffs: Vec<Elem>) -> UniPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &Field) -> UniPoly {
        UniPoly::new(field, Vec::new())
    }

    pub fn constant(field: &Field, c: Elem) -> UniPoly {
        UniPoly::new(field, vec![c])
    }

    pub fn one(field: &Field) -> UniPoly {
        UniPoly::constant(field, Elem::ONE)
    }

    /// The variable `t`.
    pub fn t(field: &Field) -> UniPoly {
        UniPoly::new(field, vec![Elem::ZERO, Elem::ONE])
    }

    /// `t - a`.
    pub fn linear(field: &Field, a: Elem) -> UniPoly {
        UniPoly::new(field, vec![field.neg(a), Elem::ONE])
    }

    /// `Π (t - a)` over the given roots.
    pub fn from_roots(field: &Field, roots: &[Elem]) -> UniPoly {
        roots
            .iter()
            .fold(UniPoly::one(field), |acc, &a| acc.mul(&UniPoly::linear(field, a)))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Elem::ONE
    }

    pub fn eval(&self, x: Elem) -> Elem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(Elem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        self.zip_with(other, |a, b| self.field.add(a, b))
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.zip_with(other, |a, b| self.field.sub(a, b))
    }

    fn zip_with(&self, other: &UniPoly, op: impl Fn(Elem, Elem) -> Elem) -> UniPoly {
        assert!(self.field.same_field(&other.field), "polynomials over different fields");
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| op(self.coeff(i), other.coeff(i))).collect();
        UniPoly::new(&self.field, coeffs)
    }

    pub fn scale(&self, c: Elem) -> UniPoly {
        let f = &self.field;
        UniPoly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        assert!(self.field.same_field(&other.field), "polynomials over different fields");
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![Elem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        UniPoly::new(f, out)
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv_nz(self.leading()))
    }

    /// Quotient and remainder with `self = q·g + r`, `deg r < deg g`.
    pub fn divrem(&self, g: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        if !self.field.same_field(&g.field) {
            return Err(Error::FieldMismatch);
        }
        let dg = g.degree().ok_or(Error::ZeroPolynomialDivisor)?;
        let f = &self.field;
        let lead_inv = f.inv_nz(g.leading());
        let mut rem = self.coeffs.clone();
        let mut quo = vec![Elem::ZERO; rem.len().saturating_sub(dg)];
        while rem.len() > dg {
            let k = rem.len() - 1 - dg;
            let c = f.mul(rem[rem.len() - 1], lead_inv);
            quo[k] = c;
            for (i, &gi) in g.coeffs.iter().enumerate() {
                rem[k + i] = f.sub(rem[k + i], f.mul(c, gi));
            }
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        Ok((UniPoly::new(f, quo), UniPoly::new(f, rem)))
    }

    pub fn rem(&self, g: &UniPoly) -> Result<UniPoly> {
        Ok(self.divrem(g)?.1)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("b is nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^n mod m`.
    pub fn pow_mod(&self, mut n: u64, m: &UniPoly) -> Result<UniPoly> {
        let mut base = self.rem(m)?;
        let mut acc = UniPoly::one(&self.field).rem(m)?;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base).rem(m)?;
            }
            base = base.mul(&base).rem(m)?;
            n >>= 1;
        }
        Ok(acc)
    }

    /// `ρ^deg · self((t − μ)/ρ)`, which stays monic when `self` is.
    pub fn affine_image(&self, rho: Elem, mu: Elem) -> UniPoly {
        let f = &self.field;
        let Some(n) = self.degree() else {
            return self.clone();
        };
        let shift = UniPoly::linear(f, mu);
        let mut power = UniPoly::one(f);
        let mut out = UniPoly::zero(f);
        for (i, &c) in self.coeffs.iter().enumerate() {
            let w = f.mul(c, f.pow(rho, (n - i) as u64));
            out = out.add(&power.scale(w));
            power = power.mul(&shift);
        }
        out
    }

    /// GF(q)-roots with multiplicity, in element enumeration order.
    pub fn roots(&self) -> Result<Vec<Elem>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut rest = self.clone();
        let mut out = Vec::new();
        for a in self.field.elements() {
            let lin = UniPoly::linear(&self.field, a);
            while rest.degree().is_some_and(|d| d > 0) && rest.eval(a).is_zero() {
                rest = rest.divrem(&lin)?.0;
                out.push(a);
            }
        }
        Ok(out)
    }

    /// Irreducibility over GF(q).
    ///
    /// Degrees up to 3 reduce to the absence of roots; higher degrees use
    /// the Ben-Or test (`gcd(f, t^{q^i} − t) = 1` for `i ≤ deg/2`).
    pub fn is_irreducible(&self) -> Result<bool> {
        let n = match self.degree() {
            None | Some(0) => return Err(Error::ConstantPolynomial),
            Some(n) => n,
        };
        if n == 1 {
            return Ok(true);
        }
        if n <= 3 {
            return Ok(self.roots()?.is_empty());
        }
        let f = self.monic();
        let t = UniPoly::t(&self.field);
        let mut h = t.clone();
        for _ in 1..=n / 2 {
            h = h.pow_mod(u64::from(self.field.q()), &f)?;
            if f.gcd(&h.sub(&t)).degree() != Some(0) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Factor shape of a monic cubic over GF(q).
    pub fn cubic_shape(&self) -> Result<CubicShape> {
        if self.degree() != Some(3) {
            return Err(Error::WrongDegree {
                expected: 3,
                found: format!("{:?}", self.degree()),
            });
        }
        let f = self.monic();
        let roots = f.roots()?;
        Ok(match roots.as_slice() {
            [] => CubicShape::Irreducible,
            &[a] => {
                let quad = f.divrem(&UniPoly::linear(&self.field, a))?.0;
                CubicShape::LinearTimesIrredQuadratic { root: a, quad }
            }
            &[a, b, c] if a == b && b == c => CubicShape::TripleRoot(a),
            &[a, b, c] if a == b => CubicShape::DoubleRootPlusSimple { double: a, simple: c },
            &[a, b, c] if b == c => CubicShape::DoubleRootPlusSimple { double: b, simple: a },
            &[a, b, c] => CubicShape::ThreeDistinctRoots([a, b, c]),
            other => {
                return Err(Error::Internal(format!(
                    "cubic with {} roots counted with multiplicity",
                    other.len()
                )))
            }
        })
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}·t")?,
                _ => write!(f, "{c}·t^{i}")?,
            }
        }
        Ok(())
    }
}

/// Degree first, then coefficients from the top down by integer encoding.
impl Ord for UniPoly {
    fn cmp(&self, other: &UniPoly) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for UniPoly {
    fn partial_cmp(&self, other: &UniPoly) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::hash::Hash for UniPoly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

/// Coefficient array low-to-high in the integer element encoding.
impl Serialize for UniPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

/// Factorization pattern of a monic cubic over GF(q).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CubicShape {
    Irreducible,
    LinearTimesIrredQuadratic { root: Elem, quad: UniPoly },
    ThreeDistinctRoots([Elem; 3]),
    DoubleRootPlusSimple { double: Elem, simple: Elem },
    TripleRoot(Elem),
}

/// The binary quadratic `a·s² + b·st + c·t²`.
///
/// Built from a 2×2 block `M'` as `(s,t) M' (s,t)ᵗ`, i.e. `a = m00`,
/// `b = m01 + m10`, `c = m11`; never symmetrized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinaryQuadratic {
    pub a: Elem,
    pub b: Elem,
    pub c: Elem,
}

impl BinaryQuadratic {
    pub fn eval(&self, field: &Field, s: Elem, t: Elem) -> Elem {
        let f = field;
        let ss = f.mul(self.a, f.mul(s, s));
        let st = f.mul(self.b, f.mul(s, t));
        let tt = f.mul(self.c, f.mul(t, t));
        f.add(f.add(ss, st), tt)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero()
    }

    /// Projective roots in P¹(F_q) by direct enumeration.
    pub fn projective_roots(&self, field: &Field) -> Vec<P1Point> {
        P1Point::enumerate(field)
            .filter(|pt| {
                let [s, t] = pt.coords();
                self.eval(field, s, t).is_zero()
            })
            .collect()
    }

    pub fn shape(&self, field: &Field) -> QuadShape {
        if self.is_zero() {
            return QuadShape::ZeroPolynomial;
        }
        match self.projective_roots(field).as_slice() {
            [] => QuadShape::Irreducible,
            &[r] => QuadShape::DoubleRoot(r),
            &[r1, r2] => QuadShape::TwoDistinctRoots([r1, r2]),
            _ => unreachable!("a nonzero binary quadratic has at most two roots"),
        }
    }
}

/// Root structure of a binary quadratic on P¹(F_q).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadShape {
    Irreducible,
    TwoDistinctRoots([P1Point; 2]),
    DoubleRoot(P1Point),
    ZeroPolynomial,
}
