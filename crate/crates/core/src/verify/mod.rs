//! Brute-force oracle: everything here works by enumerating the rational
//! points and lines of P²(F_q), independently of the case analysis in
//! [`crate::plane`] and [`crate::affine`].

pub mod report;
pub mod suites;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Line, ProjPoint};
use crate::gf::Field;
use crate::homog::HomogPoly;
use crate::plane::Concurrency;

pub use report::{affine_report, decomposition_report, AffineReport, DecompositionReport};

pub fn enumerate_p2(field: &Field) -> Vec<ProjPoint> {
    ProjPoint::enumerate(field)
}

/// Rational points of `{F = 0}` in enumeration order.
pub fn rational_points(poly: &HomogPoly) -> Result<Vec<ProjPoint>> {
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(enumerate_p2(poly.field())
        .into_iter()
        .filter(|p| poly.eval_at(p.coords()).is_zero())
        .collect())
}

pub fn count_points(poly: &HomogPoly) -> Result<usize> {
    rational_points(poly).map(|v| v.len())
}

/// Rational lines divided out of a polynomial, with what is left.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LineComponentSet {
    /// Distinct lines in enumeration order, with multiplicity.
    pub lines: Vec<(Line, u32)>,
    pub residual: HomogPoly,
}

impl LineComponentSet {
    pub fn residual_degree(&self) -> u32 {
        self.residual.degree()
    }

    pub fn distinct_lines(&self) -> Vec<Line> {
        self.lines.iter().map(|(l, _)| *l).collect()
    }

    /// Product of the line powers and the residual.
    pub fn product(&self) -> HomogPoly {
        let f = self.residual.field();
        self.lines
            .iter()
            .fold(self.residual.clone(), |acc, (l, m)| &acc * &l.to_poly(f).pow(*m))
    }
}

/// Divides out every rational line as often as it goes.
pub fn find_linear_components(poly: &HomogPoly) -> Result<LineComponentSet> {
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let f = poly.field();
    let mut residual = poly.clone();
    let mut lines = Vec::new();
    for line in Line::enumerate(f) {
        if residual.degree() == 0 {
            break;
        }
        let form = line.to_poly(f);
        let mut mult = 0;
        while residual.degree() > 0 {
            match residual.divide_exact(&form)? {
                Some(q) => {
                    residual = q;
                    mult += 1;
                }
                None => break,
            }
        }
        if mult > 0 {
            lines.push((line, mult));
        }
    }
    Ok(LineComponentSet { lines, residual })
}

/// Rational points where `F` and its three partials vanish.
pub fn singular_points(poly: &HomogPoly) -> Vec<ProjPoint> {
    if poly.degree() == 0 {
        return Vec::new();
    }
    let partials = poly.partials();
    enumerate_p2(poly.field())
        .into_iter()
        .filter(|p| {
            let c = p.coords();
            poly.eval_at(c).is_zero() && partials.iter().all(|d| d.eval_at(c).is_zero())
        })
        .collect()
}

/// The common point of all the lines, if there is one.
pub fn concurrency_check(field: &Field, lines: &[Line]) -> Option<ProjPoint> {
    let (first, rest) = lines.split_first()?;
    let second = rest.iter().find(|l| *l != first)?;
    let pt = first.meet(field, second)?;
    lines.iter().all(|l| l.contains(field, &pt)).then_some(pt)
}

/// Number of distinct lines and the most of them through one point.
pub fn concurrency(field: &Field, lines: &[Line]) -> Concurrency {
    let mut distinct = lines.to_vec();
    distinct.sort();
    distinct.dedup();
    let max_through_point = match distinct.len() {
        0 | 1 => distinct.len(),
        _ => enumerate_p2(field)
            .iter()
            .map(|p| distinct.iter().filter(|l| l.contains(field, p)).count())
            .max()
            .unwrap_or(0),
    };
    Concurrency {
        distinct_lines: distinct.len(),
        max_through_point,
    }
}

/// Point count against `N ≤ (d − 1)q + 1` for a curve without rational
/// line components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SziklaiAudit {
    pub degree: u32,
    pub points: u64,
    pub bound: u64,
    pub bound_holds: bool,
    /// Attains the bound exactly.
    pub tight: bool,
    /// The `q = d = 4` curve with 14 points.
    pub is_exceptional: bool,
}

pub fn sziklai_audit(poly: &HomogPoly) -> Result<SziklaiAudit> {
    let comps = find_linear_components(poly)?;
    if !comps.lines.is_empty() {
        return Err(Error::LinearComponentPresent);
    }
    let q = u64::from(poly.field().q());
    let degree = poly.degree();
    let points = count_points(poly)? as u64;
    let bound = (u64::from(degree).saturating_sub(1)) * q + 1;
    Ok(SziklaiAudit {
        degree,
        points,
        bound,
        bound_holds: points <= bound,
        tight: points == bound,
        is_exceptional: q == 4 && degree == 4 && points == 14,
    })
}

/// `(x + y + z)⁴ + (xy + yz + zx)² + xyz(x + y + z)`.
pub fn exceptional_quartic(field: &Field) -> HomogPoly {
    let [x, y, z] = [0, 1, 2].map(|k| HomogPoly::var(field, k));
    let s1 = &(&x + &y) + &z;
    let s2 = &(&(&x * &y) + &(&y * &z)) + &(&z * &x);
    let s3 = &(&x * &y) * &z;
    &(&s1.pow(4) + &s2.pow(2)) + &(&s3 * &s1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MissingPoints {
    pub missing: Vec<ProjPoint>,
    pub collinear: bool,
    /// A line holding all of them, when one exists and is unique.
    pub line: Option<Line>,
}

/// Points of P²(F_q) off the curve, and whether one line holds them all.
pub fn missing_points_collinear(poly: &HomogPoly) -> MissingPoints {
    let f = poly.field();
    let missing: Vec<ProjPoint> = if poly.is_zero() {
        Vec::new()
    } else {
        enumerate_p2(f)
            .into_iter()
            .filter(|p| !poly.eval_at(p.coords()).is_zero())
            .collect()
    };
    let (collinear, line) = match missing.as_slice() {
        [] | [_] => (true, None),
        [p, r, rest @ ..] => {
            let l = Line::through(f, p, r).expect("distinct points");
            let on = rest.iter().all(|s| l.contains(f, s));
            (on, on.then_some(l))
        }
    };
    MissingPoints {
        missing,
        collinear,
        line,
    }
}

/// `true` when every rational point lies on `{F = 0}`.
pub fn vanishes_everywhere(poly: &HomogPoly) -> bool {
    enumerate_p2(poly.field())
        .iter()
        .all(|p| poly.eval_at(p.coords()).is_zero())
}
