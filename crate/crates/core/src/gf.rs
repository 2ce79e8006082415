//! Finite fields GF(p^e) in the polynomial basis.
//!
//! Elements are stored as their integer encoding `Σ c_i p^i`, where
//! `c_0, ..., c_{e-1}` are the coordinates of the residue class
//! `Σ c_i t^i` modulo the field's defining polynomial. All arithmetic is
//! table driven: a field is built once and then shared (cheaply cloned)
//! by every polynomial and matrix that lives over it.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::UniPoly;

/// Largest field order accepted unless a caller asks for more.
pub const DEFAULT_MAX_Q: u32 = 64;

/// Absolute ceiling on the field order; the tables are `q²` entries.
pub const HARD_MAX_Q: u32 = 1024;

/// A field element in the integer encoding `Σ c_i p^i ∈ [0, q)`.
///
/// An `Elem` only has meaning relative to a [`Field`]. Use
/// [`FieldElement`] when the field needs to travel with the value.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Elem(u16);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn to_int(self) -> u32 {
        u32::from(self.0)
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    fn idx(self) -> usize {
        usize::from(self.0)
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Elem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u16(self.0)
    }
}

/// Construction data of a field: `{p, e, modulus}` with the modulus
/// coefficients listed low-to-high over GF(p).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
    pub modulus: Vec<u32>,
}

struct Tables {
    p: u32,
    e: u32,
    q: u32,
    /// Monic, low-to-high, length `e + 1`. Just `[0, 1]` for prime fields.
    modulus: Vec<u32>,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
}

/// A finite field GF(p^e). Cloning is cheap; all clones share tables.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

impl Field {
    /// Builds GF(p^e) under the default bound `q ≤ 64`.
    pub fn new(p: u32, e: u32) -> Result<Field> {
        Field::with_bound(p, e, DEFAULT_MAX_Q)
    }

    /// Builds GF(p^e), rejecting `p^e > max_q`.
    pub fn with_bound(p: u32, e: u32, max_q: u32) -> Result<Field> {
        if !is_prime(u64::from(p)) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::ZeroDegree);
        }
        let max = max_q.min(HARD_MAX_Q);
        let q = u64::from(p)
            .checked_pow(e)
            .filter(|&q| q <= u64::from(max))
            .ok_or(Error::FieldTooLarge {
                q: u64::from(p).saturating_pow(e),
                max,
            })? as u32;

        let prime = Field::prime(p);
        if e == 1 {
            return Ok(prime);
        }
        let modulus = smallest_irreducible(&prime, e as usize);
        Ok(Field::extension(p, e, q, modulus))
    }

    /// Builds the field of order `q`, which must be a prime power.
    pub fn from_order(q: u64) -> Result<Field> {
        Field::from_order_with_bound(q, DEFAULT_MAX_Q)
    }

    pub fn from_order_with_bound(q: u64, max_q: u32) -> Result<Field> {
        let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > u64::from(max_q.min(HARD_MAX_Q)) {
            return Err(Error::FieldTooLarge {
                q,
                max: max_q.min(HARD_MAX_Q),
            });
        }
        Field::with_bound(p as u32, e, max_q)
    }

    fn prime(p: u32) -> Field {
        let n = p as usize;
        let mut add = Vec::with_capacity(n * n);
        let mut mul = Vec::with_capacity(n * n);
        for a in 0..p {
            for b in 0..p {
                add.push(Elem(((a + b) % p) as u16));
                mul.push(Elem(((a * b) % p) as u16));
            }
        }
        let neg = (0..p).map(|a| Elem(((p - a) % p) as u16)).collect();
        let inv = inverse_table(n, &mul);
        Field(Arc::new(Tables {
            p,
            e: 1,
            q: p,
            modulus: vec![0, 1],
            add,
            mul,
            neg,
            inv,
        }))
    }

    fn extension(p: u32, e: u32, q: u32, modulus: Vec<u32>) -> Field {
        let n = q as usize;
        let digits: Vec<Vec<u32>> = (0..q).map(|v| to_digits(v, p, e)).collect();
        let from = |d: &[u32]| Elem(d.iter().rev().fold(0, |acc, &c| acc * p + c) as u16);

        let mut add = Vec::with_capacity(n * n);
        let mut mul = Vec::with_capacity(n * n);
        for a in &digits {
            for b in &digits {
                let sum: Vec<u32> = a.iter().zip(b).map(|(x, y)| (x + y) % p).collect();
                add.push(from(&sum));
                mul.push(from(&mul_mod_poly(a, b, &modulus, p)));
            }
        }
        let neg = digits
            .iter()
            .map(|d| from(&d.iter().map(|&c| (p - c) % p).collect::<Vec<_>>()))
            .collect();
        let inv = inverse_table(n, &mul);
        Field(Arc::new(Tables {
            p,
            e,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
        }))
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn e(&self) -> u32 {
        self.0.e
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.0.q
    }

    /// Defining polynomial over GF(p), low-to-high; `t` for prime fields.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.p(),
            e: self.e(),
            modulus: self.0.modulus.clone(),
        }
    }

    /// Element with integer encoding `value`.
    pub fn elem(&self, value: u32) -> Result<Elem> {
        if value < self.q() {
            Ok(Elem(value as u16))
        } else {
            Err(Error::ElementOutOfRange {
                value: u64::from(value),
                q: self.q(),
            })
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_i64(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(i64::from(self.p())) as u16)
    }

    /// All `q` elements, counting base p on the coordinates from zero.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.q()).map(|v| Elem(v as u16))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (1..self.q()).map(|v| Elem(v as u16))
    }

    /// Coordinates `(c_0, ..., c_{e-1})` of an element.
    pub fn coords(&self, a: Elem) -> Vec<u32> {
        to_digits(a.to_int(), self.p(), self.e())
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.0.add[a.idx() * self.0.q as usize + b.idx()]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.0.neg[a.idx()]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.0.mul[a.idx() * self.0.q as usize + b.idx()]
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.0.inv[a.idx()])
        }
    }

    /// Inverse of an element already known to be nonzero.
    #[inline]
    pub(crate) fn inv_nz(&self, a: Elem) -> Elem {
        debug_assert!(!a.is_zero(), "inverse of zero");
        self.0.inv[a.idx()]
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^n` with `0^0 = 1`.
    pub fn pow(&self, a: Elem, n: u64) -> Elem {
        if n == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        // the multiplicative group has order q - 1
        let mut n = n % u64::from(self.q() - 1);
        if n == 0 {
            return Elem::ONE;
        }
        let mut base = a;
        let mut acc = Elem::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    pub fn same_field(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.p() == other.p() && self.e() == other.e())
    }

    pub fn element(&self, value: u32) -> Result<FieldElement> {
        Ok(FieldElement {
            field: self.clone(),
            value: self.elem(value)?,
        })
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Field) -> bool {
        self.same_field(other)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q())
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.spec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Field, D::Error> {
        use serde::de::Error as _;
        let spec = FieldSpec::deserialize(d)?;
        let field = Field::with_bound(spec.p, spec.e, HARD_MAX_Q).map_err(D::Error::custom)?;
        if field.modulus() != spec.modulus.as_slice() {
            return Err(D::Error::custom("modulus does not match the canonical choice"));
        }
        Ok(field)
    }
}

/// Binary field operation selector for [`FieldElement::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// An element bundled with its field, for checked arithmetic.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: Elem,
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    pub fn arith(&self, other: &FieldElement, op: ArithOp) -> Result<FieldElement> {
        if !self.field.same_field(&other.field) {
            return Err(Error::FieldMismatch);
        }
        let (a, b) = (self.value, other.value);
        let f = &self.field;
        let value = match op {
            ArithOp::Add => f.add(a, b),
            ArithOp::Sub => f.sub(a, b),
            ArithOp::Mul => f.mul(a, b),
            ArithOp::Div => f.div(a, b)?,
        };
        Ok(self.with(value))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(self.with(self.field.inv(self.value)?))
    }

    pub fn pow(&self, n: u64) -> FieldElement {
        self.with(self.field.pow(self.value, n))
    }

    fn with(&self, value: Elem) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            value,
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}∈{:?}", self.value, self.field)
    }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Splits `q = p^e`, returning `None` unless `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

fn to_digits(mut v: u32, p: u32, e: u32) -> Vec<u32> {
    (0..e)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

fn inverse_table(n: usize, mul: &[Elem]) -> Vec<Elem> {
    (0..n)
        .map(|a| {
            if a == 0 {
                Elem::ZERO
            } else {
                let b = (1..n).find(|&b| mul[a * n + b] == Elem::ONE).expect("field has inverses");
                Elem(b as u16)
            }
        })
        .collect()
}

/// Product of two coordinate vectors reduced by the monic `modulus`.
fn mul_mod_poly(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let e = modulus.len() - 1;
    let mut prod = vec![0u32; 2 * e - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for k in (e..prod.len()).rev() {
        let c = prod[k];
        if c != 0 {
            prod[k] = 0;
            for (i, &m) in modulus[..e].iter().enumerate() {
                let idx = k - e + i;
                prod[idx] = (prod[idx] + (p - c) * m % p) % p;
            }
        }
    }
    prod.truncate(e);
    prod
}

/// Lexicographically smallest monic irreducible of degree `e` over the
/// prime field, ordering by `(c_{e-1}, ..., c_0)`.
fn smallest_irreducible(prime: &Field, e: usize) -> Vec<u32> {
    let p = prime.p();
    let count = u64::from(p).pow(e as u32);
    for n in 0..count {
        let mut coeffs: Vec<u32> = to_digits(n as u32, p, e as u32);
        coeffs.push(1);
        let poly = UniPoly::new(
            prime,
            coeffs.iter().map(|&c| prime.elem(c).expect("digit below p")).collect(),
        );
        if poly.is_irreducible().expect("degree at least 2") {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_fields() -> Vec<Field> {
        [2, 3, 4, 5, 7, 8, 9]
            .into_iter()
            .map(|q| Field::from_order(q).unwrap())
            .collect()
    }

    #[test]
    fn moduli_are_lexicographically_smallest() {
        assert_eq!(Field::new(2, 1).unwrap().modulus(), &[0, 1]);
        assert_eq!(Field::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
        assert_eq!(Field::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        // t^3 + t + 1 is the first cubic over GF(2) without roots
        assert_eq!(Field::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
    }

    #[test]
    fn construction_is_deterministic() {
        let a = Field::new(2, 6).unwrap();
        let b = Field::new(2, 6).unwrap();
        assert_eq!(a.modulus(), b.modulus());
        assert_eq!(a, b);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Field::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert_eq!(Field::new(2, 0).unwrap_err(), Error::ZeroDegree);
        assert!(matches!(Field::new(2, 7), Err(Error::FieldTooLarge { .. })));
        assert!(Field::with_bound(2, 7, 128).is_ok());
        assert_eq!(Field::from_order(6).unwrap_err(), Error::NotPrimePower(6));
        assert!(matches!(Field::from_order(81), Err(Error::FieldTooLarge { .. })));
    }

    #[test]
    fn gf4_arithmetic() {
        let f = Field::new(2, 2).unwrap();
        let g = f.elem(2).unwrap();
        let g1 = f.elem(3).unwrap();
        assert_eq!(f.mul(g, g), g1);
        assert_eq!(f.inv(g).unwrap(), g1);
        assert_eq!(f.pow(g, 3), Elem::ONE);
        assert_eq!(f.elements().collect::<Vec<_>>(), vec![Elem(0), Elem(1), g, g1]);
    }

    #[test]
    fn prime_field_arithmetic() {
        let f5 = Field::new(5, 1).unwrap();
        assert_eq!(f5.div(f5.elem(2).unwrap(), f5.elem(3).unwrap()).unwrap(), Elem(4));
        let f7 = Field::new(7, 1).unwrap();
        assert_eq!(f7.inv(Elem(3)).unwrap(), Elem(5));
        assert_eq!(f7.inv(Elem::ONE).unwrap(), Elem::ONE);
        assert_eq!(f7.inv(Elem::ZERO), Err(Error::DivisionByZero));
    }

    #[test]
    fn checked_elements() {
        let f = Field::new(5, 1).unwrap();
        let g = Field::new(7, 1).unwrap();
        let a = f.element(2).unwrap();
        let b = g.element(2).unwrap();
        assert_eq!(a.arith(&b, ArithOp::Add), Err(Error::FieldMismatch));
        let zero = f.element(0).unwrap();
        assert_eq!(a.arith(&zero, ArithOp::Div), Err(Error::DivisionByZero));
        assert_eq!(a.arith(&a, ArithOp::Mul).unwrap().value(), Elem(4));
        assert_eq!(a.inv().unwrap().value(), Elem(3));
        assert!(f.element(5).is_err());
    }

    #[test]
    fn field_axioms_exhaustive() {
        for f in all_fields().into_iter().filter(|f| f.q() <= 9) {
            let els: Vec<Elem> = f.elements().collect();
            assert_eq!(els.len(), f.q() as usize);
            for &a in &els {
                assert_eq!(f.mul(a, Elem::ONE), a);
                assert_eq!(f.add(a, Elem::ZERO), a);
                assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
                assert_eq!(f.pow(a, u64::from(f.q())), a);
                assert_eq!(f.pow(a, 0), Elem::ONE);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
                    assert_eq!(f.pow(a, u64::from(f.q() - 1)), Elem::ONE);
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn pow_matches_repeated_product() {
        let f = Field::new(3, 2).unwrap();
        for a in f.elements() {
            let mut acc = Elem::ONE;
            for n in 0..20u64 {
                assert_eq!(f.pow(a, n), acc, "{a}^{n}");
                acc = f.mul(acc, a);
            }
        }
    }

    #[test]
    fn spec_round_trips_through_json() {
        let f = Field::new(3, 2).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"{"p":3,"e":2,"modulus":[1,0,1]}"#);
        let back: Field = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<Field>(r#"{"p":3,"e":2,"modulus":[2,2,1]}"#).is_err());
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(64), Some((2, 6)));
        assert_eq!(prime_power(49), Some((7, 2)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }
}
