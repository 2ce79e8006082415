//! Sparse homogeneous polynomials in `x, y, z` over GF(q).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::ProjPoint;
use crate::gf::{Elem, Field};
use crate::matrix::Matrix3;

/// Exponents of `x^i y^j z^k`.
///
/// The derived order is lexicographic with `x > y > z`, which is graded
/// lex for monomials of equal total degree.
pub type Exponents = [u16; 3];

/// A homogeneous polynomial with an explicit degree, so that the zero
/// polynomial of a given degree is representable.
#[derive(Clone, PartialEq, Eq)]
pub struct HomogPoly {
    field: Field,
    degree: u32,
    terms: BTreeMap<Exponents, Elem>,
}

fn total(e: &Exponents) -> u32 {
    e.iter().map(|&k| u32::from(k)).sum()
}

impl HomogPoly {
    pub fn zero(field: &Field, degree: u32) -> HomogPoly {
        HomogPoly {
            field: field.clone(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &Field, c: Elem) -> HomogPoly {
        HomogPoly::monomial(field, c, [0, 0, 0])
    }

    pub fn monomial(field: &Field, c: Elem, exps: Exponents) -> HomogPoly {
        let mut p = HomogPoly::zero(field, total(&exps));
        p.add_term(exps, c);
        p
    }

    /// `x`, `y` or `z` for `var = 0, 1, 2`.
    pub fn var(field: &Field, var: usize) -> HomogPoly {
        let mut e = [0; 3];
        e[var] = 1;
        HomogPoly::monomial(field, Elem::ONE, e)
    }

    /// `a·x + b·y + c·z`.
    pub fn linear(field: &Field, [a, b, c]: [Elem; 3]) -> HomogPoly {
        HomogPoly::from_terms(field, 1, [([1, 0, 0], a), ([0, 1, 0], b), ([0, 0, 1], c)])
    }

    /// Sums the given terms; panics if an exponent triple has the wrong
    /// total degree.
    pub fn from_terms(
        field: &Field,
        degree: u32,
        terms: impl IntoIterator<Item = (Exponents, Elem)>,
    ) -> HomogPoly {
        let mut p = HomogPoly::zero(field, degree);
        for (e, c) in terms {
            assert_eq!(total(&e), degree, "monomial {e:?} is not of degree {degree}");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponents, c: Elem) {
        if c.is_zero() {
            return;
        }
        let f = &self.field;
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: Exponents) -> Elem {
        self.terms.get(&e).copied().unwrap_or(Elem::ZERO)
    }

    /// Terms in decreasing graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (Exponents, Elem)> + '_ {
        self.terms.iter().rev().map(|(&e, &c)| (e, c))
    }

    pub fn leading(&self) -> Option<(Exponents, Elem)> {
        self.terms.last_key_value().map(|(&e, &c)| (e, c))
    }

    fn check_same(&self, other: &HomogPoly) {
        assert!(self.field.same_field(&other.field), "polynomials over different fields");
    }

    pub fn scale(&self, c: Elem) -> HomogPoly {
        let f = &self.field;
        let mut out = HomogPoly::zero(f, self.degree);
        if !c.is_zero() {
            out.terms = self.terms.iter().map(|(&e, &a)| (e, f.mul(a, c))).collect();
        }
        out
    }

    /// Monic in the graded-lex leading coefficient; zero stays zero.
    pub fn normalized(&self) -> HomogPoly {
        match self.leading() {
            Some((_, c)) => self.scale(self.field.inv_nz(c)),
            None => self.clone(),
        }
    }

    /// The `c ≠ 0` with `self = c · other`, if there is one.
    pub fn scalar_ratio(&self, other: &HomogPoly) -> Option<Elem> {
        self.check_same(other);
        if self.degree != other.degree || self.terms.len() != other.terms.len() {
            return None;
        }
        let ((e1, c1), (e2, c2)) = (self.leading()?, other.leading()?);
        if e1 != e2 {
            return None;
        }
        let ratio = self.field.div(c1, c2).ok()?;
        (other.scale(ratio) == *self).then_some(ratio)
    }

    pub fn mul(&self, other: &HomogPoly) -> HomogPoly {
        self.check_same(other);
        let f = &self.field;
        let mut out = HomogPoly::zero(f, self.degree + other.degree);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                out.add_term([a[0] + b[0], a[1] + b[1], a[2] + b[2]], f.mul(ca, cb));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> HomogPoly {
        let mut acc = HomogPoly::constant(&self.field, Elem::ONE);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Value at a coordinate triple.
    pub fn eval_at(&self, v: [Elem; 3]) -> Elem {
        let f = &self.field;
        let n = self.degree as usize + 1;
        let mut pows = vec![Elem::ONE; 3 * n];
        for (k, &c) in v.iter().enumerate() {
            for i in 1..n {
                pows[k * n + i] = f.mul(pows[k * n + i - 1], c);
            }
        }
        self.terms.iter().fold(Elem::ZERO, |acc, (e, &c)| {
            let m = f.mul(
                f.mul(pows[e[0] as usize], pows[n + e[1] as usize]),
                pows[2 * n + e[2] as usize],
            );
            f.add(acc, f.mul(c, m))
        })
    }

    /// Value at the normalized representative of a point. Whether the
    /// point lies on `{F = 0}` does not depend on the representative.
    pub fn eval(&self, pt: &ProjPoint) -> Result<Elem> {
        let q = self.field.q();
        if let Some(c) = pt.coords().iter().find(|c| c.to_int() >= q) {
            return Err(Error::ElementOutOfRange {
                value: u64::from(c.to_int()),
                q,
            });
        }
        Ok(self.eval_at(pt.coords()))
    }

    /// `F ∘ B`: substitutes `(x, y, z)ᵗ = B (x', y', z')ᵗ`.
    pub fn linear_substitute(&self, b: &Matrix3) -> Result<HomogPoly> {
        let f = &self.field;
        if b.det(f).is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(self.compose_linear(b))
    }

    /// Substitution without the invertibility check.
    pub(crate) fn compose_linear(&self, b: &Matrix3) -> HomogPoly {
        let f = &self.field;
        let mut max = [0u16; 3];
        for e in self.terms.keys() {
            for k in 0..3 {
                max[k] = max[k].max(e[k]);
            }
        }
        let powers: Vec<Vec<HomogPoly>> = (0..3)
            .map(|k| {
                let form = HomogPoly::linear(f, b.0[k]);
                let mut v = vec![HomogPoly::constant(f, Elem::ONE)];
                for i in 1..=max[k] as usize {
                    v.push(v[i - 1].mul(&form));
                }
                v
            })
            .collect();
        let mut out = HomogPoly::zero(f, self.degree);
        for (e, &c) in &self.terms {
            let prod = powers[0][e[0] as usize]
                .mul(&powers[1][e[1] as usize])
                .mul(&powers[2][e[2] as usize]);
            for (pe, pc) in prod.terms {
                out.add_term(pe, f.mul(c, pc));
            }
        }
        out
    }

    /// `Some(Q)` with `self = Q · g`, or `None` when `g` does not divide.
    ///
    /// Division under graded lex: if `g | F`, each intermediate remainder
    /// is a multiple of `g`, so its leading term is divisible by that of
    /// `g`. The first failure therefore proves non-divisibility.
    pub fn divide_exact(&self, g: &HomogPoly) -> Result<Option<HomogPoly>> {
        if !self.field.same_field(&g.field) {
            return Err(Error::FieldMismatch);
        }
        let (ge, gc) = g.leading().ok_or(Error::ZeroPolynomialDivisor)?;
        if g.degree > self.degree {
            return Ok(None);
        }
        let f = &self.field;
        let inv = f.inv_nz(gc);
        let mut rem = self.terms.clone();
        let mut quo = HomogPoly::zero(f, self.degree - g.degree);
        while let Some((&e, &c)) = rem.last_key_value() {
            if (0..3).any(|k| e[k] < ge[k]) {
                return Ok(None);
            }
            let qe = [e[0] - ge[0], e[1] - ge[1], e[2] - ge[2]];
            let qc = f.mul(c, inv);
            quo.terms.insert(qe, qc);
            for (te, &tc) in &g.terms {
                let key = [qe[0] + te[0], qe[1] + te[1], qe[2] + te[2]];
                let sub = f.mul(qc, tc);
                let entry = rem.entry(key).or_insert(Elem::ZERO);
                *entry = f.sub(*entry, sub);
                if entry.is_zero() {
                    rem.remove(&key);
                }
            }
        }
        Ok(Some(quo))
    }

    /// Formal partials `(F_x, F_y, F_z)`; exponent multipliers are reduced
    /// mod p. A constant has zero partials of degree 0.
    pub fn partials(&self) -> [HomogPoly; 3] {
        let f = &self.field;
        let deg = self.degree.saturating_sub(1);
        std::array::from_fn(|k| {
            let mut out = HomogPoly::zero(f, deg);
            for (e, &c) in &self.terms {
                if e[k] == 0 {
                    continue;
                }
                let mult = f.from_i64(i64::from(e[k]));
                let mut d = *e;
                d[k] -= 1;
                out.add_term(d, f.mul(mult, c));
            }
            out
        })
    }
}

impl Add for &HomogPoly {
    type Output = HomogPoly;

    fn add(self, other: &HomogPoly) -> HomogPoly {
        self.check_same(other);
        assert_eq!(self.degree, other.degree, "adding polynomials of different degree");
        let mut out = self.clone();
        for (&e, &c) in &other.terms {
            out.add_term(e, c);
        }
        out
    }
}

impl Sub for &HomogPoly {
    type Output = HomogPoly;

    fn sub(self, other: &HomogPoly) -> HomogPoly {
        self + &(-other)
    }
}

impl Neg for &HomogPoly {
    type Output = HomogPoly;

    fn neg(self) -> HomogPoly {
        self.scale(self.field.neg(Elem::ONE))
    }
}

impl Mul for &HomogPoly {
    type Output = HomogPoly;

    fn mul(self, other: &HomogPoly) -> HomogPoly {
        HomogPoly::mul(self, other)
    }
}

impl fmt::Debug for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0[deg {}]", self.degree);
        }
        for (n, (e, c)) in self.terms().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (name, k) in ["x", "y", "z"].iter().zip(e) {
                match k {
                    0 => {}
                    1 => write!(f, "·{name}")?,
                    _ => write!(f, "·{name}^{k}")?,
                }
            }
        }
        Ok(())
    }
}

/// List of `[i, j, k, c]` in decreasing graded-lex order.
impl Serialize for HomogPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (e, c) in self.terms() {
            seq.serialize_element(&[
                u32::from(e[0]),
                u32::from(e[1]),
                u32::from(e[2]),
                c.to_int(),
            ])?;
        }
        seq.end()
    }
}
