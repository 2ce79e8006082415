//! Rational points and lines of P¹ and P² over GF(q).

use std::fmt;

use serde::{Serialize, Serializer};

use crate::gf::{Elem, Field};
use crate::homog::HomogPoly;

/// Scales a nonzero coordinate vector so its first nonzero entry is 1.
fn normalize<const N: usize>(field: &Field, mut v: [Elem; N]) -> Option<[Elem; N]> {
    let lead = *v.iter().find(|c| !c.is_zero())?;
    let inv = field.inv_nz(lead);
    for c in &mut v {
        *c = field.mul(*c, inv);
    }
    Some(v)
}

/// Enumerates normalized vectors `(1, *, ..), (0, 1, *, ..), ...` with the
/// free coordinates counting in element order, last coordinate fastest.
fn enumerate_normalized<const N: usize>(field: &Field) -> Vec<[Elem; N]> {
    let q = field.q() as usize;
    let mut out = Vec::new();
    for lead in 0..N {
        let free = N - lead - 1;
        for mut n in 0..q.pow(free as u32) {
            let mut v = [Elem::ZERO; N];
            v[lead] = Elem::ONE;
            for k in (lead + 1..N).rev() {
                v[k] = field.elem((n % q) as u32).expect("digit below q");
                n /= q;
            }
            out.push(v);
        }
    }
    out
}

/// A point `(s:t)` of P¹(F_q), normalized.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct P1Point([Elem; 2]);

impl P1Point {
    pub fn new(field: &Field, coords: [Elem; 2]) -> Option<P1Point> {
        normalize(field, coords).map(P1Point)
    }

    pub fn coords(&self) -> [Elem; 2] {
        self.0
    }

    /// The `q + 1` points: `(1:t)` for every `t`, then `(0:1)`.
    pub fn enumerate(field: &Field) -> impl Iterator<Item = P1Point> {
        enumerate_normalized::<2>(field).into_iter().map(P1Point)
    }
}

impl fmt::Debug for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{})", self.0[0], self.0[1])
    }
}

/// A point of P²(F_q) whose first nonzero coordinate is 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint([Elem; 3]);

impl ProjPoint {
    /// Normalizes `coords`; `None` for the zero vector.
    pub fn new(field: &Field, coords: [Elem; 3]) -> Option<ProjPoint> {
        normalize(field, coords).map(ProjPoint)
    }

    pub fn coords(&self) -> [Elem; 3] {
        self.0
    }

    /// All `q² + q + 1` points: `(1:y:z)`, then `(0:1:z)`, then `(0:0:1)`.
    pub fn enumerate(field: &Field) -> Vec<ProjPoint> {
        enumerate_normalized::<3>(field).into_iter().map(ProjPoint).collect()
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{}:{})", self.0[0], self.0[1], self.0[2])
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// A rational line `a·x + b·y + c·z = 0`, with normalized coefficients.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line([Elem; 3]);

impl Line {
    pub fn new(field: &Field, coeffs: [Elem; 3]) -> Option<Line> {
        normalize(field, coeffs).map(Line)
    }

    pub fn coeffs(&self) -> [Elem; 3] {
        self.0
    }

    /// Same order as [`ProjPoint::enumerate`], read as dual coordinates.
    pub fn enumerate(field: &Field) -> Vec<Line> {
        enumerate_normalized::<3>(field).into_iter().map(Line).collect()
    }

    pub fn contains(&self, field: &Field, pt: &ProjPoint) -> bool {
        let [a, b, c] = self.0;
        let [x, y, z] = pt.coords();
        let v = field.add(field.add(field.mul(a, x), field.mul(b, y)), field.mul(c, z));
        v.is_zero()
    }

    /// Intersection with another line; `None` if they coincide.
    pub fn meet(&self, field: &Field, other: &Line) -> Option<ProjPoint> {
        ProjPoint::new(field, cross(field, self.0, other.0))
    }

    /// The line through two points; `None` if they coincide.
    pub fn through(field: &Field, p: &ProjPoint, r: &ProjPoint) -> Option<Line> {
        Line::new(field, cross(field, p.coords(), r.coords()))
    }

    pub fn to_poly(&self, field: &Field) -> HomogPoly {
        HomogPoly::linear(field, self.0)
    }

    /// The line defined by a degree-1 form; `None` for other inputs.
    pub fn from_poly(poly: &HomogPoly) -> Option<Line> {
        if poly.degree() != 1 {
            return None;
        }
        let f = poly.field();
        Line::new(f, [poly.coeff([1, 0, 0]), poly.coeff([0, 1, 0]), poly.coeff([0, 0, 1])])
    }
}

impl fmt::Debug for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}x+{}y+{}z]", self.0[0], self.0[1], self.0[2])
    }
}

impl Serialize for Line {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

fn cross(field: &Field, u: [Elem; 3], v: [Elem; 3]) -> [Elem; 3] {
    let f = field;
    let m = |a, b, c, d| f.sub(f.mul(a, b), f.mul(c, d));
    [
        m(u[1], v[2], u[2], v[1]),
        m(u[2], v[0], u[0], v[2]),
        m(u[0], v[1], u[1], v[0]),
    ]
}
