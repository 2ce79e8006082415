//! Randomized algebraic laws shared by the property tests and the
//! acceptance run. Every law draws `q` from {2, 3, 4, 5}.

#![allow(dead_code)]

use std::fmt::Debug;

use proptest::prelude::*;
use proptest::sample::select;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use fillcurve::affine::{
    affine_tag, apply_transform, build_gm, classify_affine, has_canonical_shape, BTransform,
};
use fillcurve::plane::{build_fa, build_uvw, classify, equiv_key};
use fillcurve::poly::UniPoly;
use fillcurve::verify::count_points;
use fillcurve::{Elem, Field, HomogPoly, Matrix2, Matrix23, Matrix3};

pub const SMALL_Q: [u64; 4] = [2, 3, 4, 5];

/// Random words turned into field objects on demand.
pub struct Draw {
    pub f: Field,
    raw: Vec<u32>,
    pos: usize,
}

impl Draw {
    pub fn new(q: u64, raw: Vec<u32>) -> Draw {
        Draw {
            f: Field::from_order(q).unwrap(),
            raw,
            pos: 0,
        }
    }

    fn word(&mut self) -> u32 {
        let w = self.raw[self.pos % self.raw.len()].rotate_left(self.pos as u32 / self.raw.len() as u32);
        self.pos += 1;
        w
    }

    pub fn below(&mut self, n: u32) -> u32 {
        self.word() % n
    }

    pub fn elem(&mut self) -> Elem {
        let k = self.below(self.f.q());
        self.f.elem(k).unwrap()
    }

    pub fn nonzero(&mut self) -> Elem {
        let k = 1 + self.below(self.f.q() - 1);
        self.f.elem(k).unwrap()
    }

    pub fn matrix3(&mut self) -> Matrix3 {
        let ints: Vec<u32> = (0..9).map(|_| self.elem().to_int()).collect();
        Matrix3::from_ints(&self.f, &ints).unwrap()
    }

    pub fn matrix23(&mut self) -> Matrix23 {
        let ints: Vec<u32> = (0..6).map(|_| self.elem().to_int()).collect();
        Matrix23::from_ints(&self.f, &ints).unwrap()
    }

    pub fn nonzero_matrix23(&mut self) -> Matrix23 {
        loop {
            let m = self.matrix23();
            if !m.is_zero() {
                return m;
            }
        }
    }

    /// `P·L·D·U` with a permutation `P`, unitriangular `L`, `U` and an
    /// invertible diagonal `D`; every invertible matrix has this form.
    pub fn invertible(&mut self) -> Matrix3 {
        let f = self.f.clone();
        let (o, z) = (Elem::ONE, Elem::ZERO);
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let perm = perms[self.below(6) as usize];
        let mut p = [[z; 3]; 3];
        for (i, &j) in perm.iter().enumerate() {
            p[i][j] = o;
        }
        let l = fillcurve::matrix::Matrix([[o, z, z], [self.elem(), o, z], [self.elem(), self.elem(), o]]);
        let d = Matrix3::diagonal([self.nonzero(), self.nonzero(), self.nonzero()]);
        let u = fillcurve::matrix::Matrix([[o, self.elem(), self.elem()], [z, o, self.elem()], [z, z, o]]);
        fillcurve::matrix::Matrix(p).mul(&f, &l).mul(&f, &d).mul(&f, &u)
    }

    pub fn btransform(&mut self) -> BTransform {
        let f = self.f.clone();
        loop {
            let ints: Vec<u32> = (0..4).map(|_| self.elem().to_int()).collect();
            let b = Matrix2::from_ints(&f, &ints).unwrap();
            if let Ok(t) = BTransform::new(&f, b, [self.elem(), self.elem()], self.nonzero()) {
                return t;
            }
        }
    }

    pub fn unipoly(&mut self, max_degree: u32) -> UniPoly {
        let n = self.below(max_degree + 2) as usize;
        let coeffs = (0..n).map(|_| self.elem()).collect();
        UniPoly::new(&self.f, coeffs)
    }
}

fn draws() -> impl Strategy<Value = (u64, Vec<u32>)> {
    (select(SMALL_Q.to_vec()), prop::collection::vec(any::<u32>(), 48))
}

fn run<T: Debug>(
    cases: u32,
    strategy: impl Strategy<Value = T>,
    test: impl Fn(T) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn with_draw(cases: u32, test: impl Fn(&mut Draw) -> Result<(), TestCaseError>) -> Result<(), String> {
    run(cases, draws(), |(q, raw)| test(&mut Draw::new(q, raw)))
}

pub fn field_additive_group(cases: u32) -> Result<(), String> {
    with_draw(cases, |d| {
        let f = d.f.clone();
        let (a, b, c) = (d.elem(), d.elem(), d.elem());
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.add(a, Elem::ZERO), a);
        prop_assert_eq!(f.add(a, f.neg(a)), Elem::ZERO);
        prop_assert_eq!(f.sub(a, b), f.add(a, f.neg(b)));
        Ok(())
    })
}

pub fn field_multiplicative_group(cases: u32) -> Result<(), String> {
    with_draw(cases, |d| {
        let f = d.f.clone();
        let (a, b, c) = (d.elem(), d.elem(), d.elem());
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(a, Elem::ONE), a);
        prop_assert_eq!(f.mul(a, Elem::ZERO), Elem::ZERO);
        let n = d.nonzero();
        prop_assert_eq!(f.mul(n, f.inv(n).unwrap()), Elem::ONE);
        prop_assert_eq!(f.mul(f.div(a, n).unwrap(), n), a);
        prop_assert!(f.inv(Elem::ZERO).is_err());
        Ok(())
    })
}

pub fn field_distributive_and_frobenius(cases: u32) -> Result<(), String> {
    with_draw(cases, |d| {
        let f = d.f.clone();
        let (a, b, c) = (d.elem(), d.elem(), d.elem());
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        let p = u64::from(f.p());
        prop_assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
        prop_assert_eq!(f.pow(a, u64::from(f.q())), a);
        Ok(())
    })
}

pub fn poly_division(cases: u32) -> Result<(), String> {
    with_draw(cases, |d| {
        let a = d.unipoly(6);
        let g = d.unipoly(3);
        if g.is_zero() {
            prop_assert!(a.divrem(&g).is_err());
            return Ok(());
        }
        let (quo, rem) = a.divrem(&g).unwrap();
        prop_assert_eq!(&quo.mul(&g).add(&rem), &a);
        prop_assert!(rem.degree().map_or(true, |r| r < g.degree().unwrap()));
        if !a.is_zero() {
            for r in a.roots().unwrap() {
                prop_assert!(a.eval(r).is_zero());
            }
            let gcd = a.gcd(&g);
            prop_assert!(a.rem(&gcd).unwrap().is_zero() && g.rem(&gcd).unwrap().is_zero());
        }
        Ok(())
    })
}

/// `(U, V, W)(P x) = det P · ᵗP⁻¹ (U, V, W)(x)` for invertible `P`.
pub fn uvw_transformation(cases: u32) -> Result<(), String> {
    with_draw(cases, |d| {
        let f = d.f.clone();
        let p = d.invertible();
        let uvw = build_uvw(&f);
        let m = p.transpose().inverse(&f).unwrap().scale(&f, p.det(&f));
        for k in 0..3 {
            let lhs = uvw[k].linear_substitute(&p).unwrap();
            let rhs = (0..3).fold(HomogPoly::zero(&f, uvw[k].degree()), |acc, j| {
                &acc + &uvw[j].scale(m.get(k, j))
            });
            prop_assert_eq!(lhs, rhs, "component {}", k);
        }
        Ok(())
    })
}

/// With `C = S A S⁻¹` and `T = ᵗS⁻¹`: `F_A = det S · F_C ∘ T`.
pub fn fa_transformation(cases: u32) -> Result<(), String> {
    with_draw(cases, |d| {
        let f = d.f.clone();
        let a = d.matrix3();
        let s = d.invertible();
        let s_inv = s.inverse(&f).unwrap();
        let c = s.mul(&f, &a).mul(&f, &s_inv);
        let t = s.transpose().inverse(&f).unwrap();
        let rhs = build_fa(&f, &c).linear_substitute(&t).unwrap().scale(s.det(&f));
        prop_assert_eq!(build_fa(&f, &a), rhs);
        Ok(())
    })
}

/// `F_{ρA + μE} = ρ F_A`.
pub fn fa_linearity(cases: u32) -> Result<(), String> {
    with_draw(cases, |d| {
        let f = d.f.clone();
        let a = d.matrix3();
        let (rho, mu) = (d.elem(), d.elem());
        let shifted = a.scale(&f, rho).add(&f, &Matrix3::scalar(&f, mu));
        prop_assert_eq!(build_fa(&f, &shifted), build_fa(&f, &a).scale(rho));
        Ok(())
    })
}

/// `G_M ∘ σ = G_{σ(M)}`, and applying `σ` then `τ` is applying `σ·τ`.
pub fn affine_transformation(cases: u32) -> Result<(), String> {
    with_draw(cases, |d| {
        let f = d.f.clone();
        let m = d.nonzero_matrix23();
        let (sigma, tau) = (d.btransform(), d.btransform());
        let n = apply_transform(&f, &m, &sigma);
        prop_assert_eq!(
            build_gm(&f, &m).unwrap().linear_substitute(&sigma.matrix()).unwrap(),
            build_gm(&f, &n).unwrap()
        );
        prop_assert_eq!(apply_transform(&f, &n, &tau), apply_transform(&f, &m, &sigma.compose(&f, &tau)));
        prop_assert_eq!(apply_transform(&f, &n, &sigma.inverse(&f)), m);
        Ok(())
    })
}

/// The equivalence key is constant on `ρ·S A S⁻¹ + μE` and on `ᵗA`.
pub fn equiv_key_invariance(cases: u32) -> Result<(), String> {
    with_draw(cases, |d| {
        let f = d.f.clone();
        let a = d.matrix3();
        let s = d.invertible();
        let (rho, mu) = (d.nonzero(), d.elem());
        let b = s
            .mul(&f, &a)
            .mul(&f, &s.inverse(&f).unwrap())
            .scale(&f, rho)
            .add(&f, &Matrix3::scalar(&f, mu));
        let key = equiv_key(&f, &a);
        prop_assert_eq!(&equiv_key(&f, &b), &key);
        prop_assert_eq!(&equiv_key(&f, &a.transpose()), &key);
        Ok(())
    })
}

/// Similar matrices get the same case label.
pub fn classification_invariance(cases: u32) -> Result<(), String> {
    with_draw(cases, |d| {
        let f = d.f.clone();
        let a = d.matrix3();
        let s = d.invertible();
        let c = s.mul(&f, &a).mul(&f, &s.inverse(&f).unwrap());
        prop_assert_eq!(classify(&f, &c), classify(&f, &a));
        Ok(())
    })
}

/// Tags survive the transformation group, and the reduction lands on a
/// canonical matrix through its witness.
pub fn affine_reduction(cases: u32) -> Result<(), String> {
    with_draw(cases, |d| {
        let f = d.f.clone();
        let m = d.nonzero_matrix23();
        let sigma = d.btransform();
        let tag = affine_tag(&f, &m).unwrap();
        prop_assert_eq!(affine_tag(&f, &apply_transform(&f, &m, &sigma)).unwrap(), tag);
        let label = classify_affine(&f, &m).unwrap();
        prop_assert_eq!(label.tag, tag);
        prop_assert_eq!(apply_transform(&f, &m, &label.witness), label.canonical);
        prop_assert!(has_canonical_shape(&f, tag, &label.canonical));
        Ok(())
    })
}

/// Rational point counts are projective invariants.
pub fn point_count_invariance(cases: u32) -> Result<(), String> {
    with_draw(cases, |d| {
        let f = d.f.clone();
        let g = build_gm(&f, &d.nonzero_matrix23()).unwrap();
        let b = d.invertible();
        prop_assert_eq!(
            count_points(&g.linear_substitute(&b).unwrap()).unwrap(),
            count_points(&g).unwrap()
        );
        Ok(())
    })
}

pub type Law = (&'static str, fn(u32) -> Result<(), String>);

pub const LAWS: [Law; 12] = [
    ("field additive group", field_additive_group),
    ("field multiplicative group", field_multiplicative_group),
    ("field distributivity and Frobenius", field_distributive_and_frobenius),
    ("polynomial division", poly_division),
    ("(U, V, W) transformation", uvw_transformation),
    ("F_A transformation", fa_transformation),
    ("F_A linearity", fa_linearity),
    ("G_M transformation", affine_transformation),
    ("equivalence key invariance", equiv_key_invariance),
    ("case label invariance", classification_invariance),
    ("affine reduction", affine_reduction),
    ("point count invariance", point_count_invariance),
];

pub const CASES_PER_LAW: u32 = 1000;
