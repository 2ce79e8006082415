//! Fixed-size dense matrices over GF(q).

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};

/// An `R × C` matrix. Entries are raw [`Elem`]s, so every operation takes
/// the field explicitly.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix<const R: usize, const C: usize>(pub [[Elem; C]; R]);

pub type Matrix2 = Matrix<2, 2>;
pub type Matrix3 = Matrix<3, 3>;
pub type Matrix23 = Matrix<2, 3>;

impl<const R: usize, const C: usize> Matrix<R, C> {
    pub const ZERO: Self = Matrix([[Elem::ZERO; C]; R]);

    pub fn rows(&self) -> &[[Elem; C]; R] {
        &self.0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.0[i][j]
    }

    /// Row-major entries in the integer element encoding.
    pub fn from_ints(field: &Field, entries: &[u32]) -> Result<Self> {
        if entries.len() != R * C {
            return Err(Error::MatrixShape {
                expected: R * C,
                found: entries.len(),
            });
        }
        let mut m = Self::ZERO;
        for (k, &v) in entries.iter().enumerate() {
            m.0[k / C][k % C] = field.elem(v)?;
        }
        Ok(m)
    }

    pub fn to_ints(&self) -> Vec<u32> {
        self.0.iter().flatten().map(|e| e.to_int()).collect()
    }

    /// The matrix whose row-major entries are the base-q digits of
    /// `index`, most significant first.
    pub fn from_index(field: &Field, mut index: u64) -> Self {
        let q = u64::from(field.q());
        let mut m = Self::ZERO;
        for k in (0..R * C).rev() {
            m.0[k / C][k % C] = field.elem((index % q) as u32).expect("digit below q");
            index /= q;
        }
        m
    }

    pub fn index(&self, field: &Field) -> u64 {
        let q = u64::from(field.q());
        self.0
            .iter()
            .flatten()
            .fold(0, |acc, e| acc * q + u64::from(e.to_int()))
    }

    /// Number of matrices of this shape over the field.
    pub fn count(field: &Field) -> u64 {
        u64::from(field.q()).pow((R * C) as u32)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().flatten().all(|e| e.is_zero())
    }

    pub fn add(&self, field: &Field, other: &Self) -> Self {
        let mut m = *self;
        for i in 0..R {
            for j in 0..C {
                m.0[i][j] = field.add(self.0[i][j], other.0[i][j]);
            }
        }
        m
    }

    pub fn sub(&self, field: &Field, other: &Self) -> Self {
        let mut m = *self;
        for i in 0..R {
            for j in 0..C {
                m.0[i][j] = field.sub(self.0[i][j], other.0[i][j]);
            }
        }
        m
    }

    pub fn scale(&self, field: &Field, c: Elem) -> Self {
        let mut m = *self;
        for e in m.0.iter_mut().flatten() {
            *e = field.mul(*e, c);
        }
        m
    }

    pub fn mul<const K: usize>(&self, field: &Field, other: &Matrix<C, K>) -> Matrix<R, K> {
        let mut m = Matrix::<R, K>::ZERO;
        for i in 0..R {
            for k in 0..K {
                let mut acc = Elem::ZERO;
                for j in 0..C {
                    acc = field.add(acc, field.mul(self.0[i][j], other.0[j][k]));
                }
                m.0[i][k] = acc;
            }
        }
        m
    }

    pub fn mul_vec(&self, field: &Field, v: &[Elem; C]) -> [Elem; R] {
        let mut out = [Elem::ZERO; R];
        for (i, row) in self.0.iter().enumerate() {
            out[i] = row
                .iter()
                .zip(v)
                .fold(Elem::ZERO, |acc, (&a, &b)| field.add(acc, field.mul(a, b)));
        }
        out
    }

    pub fn transpose(&self) -> Matrix<C, R> {
        let mut m = Matrix::<C, R>::ZERO;
        for i in 0..R {
            for j in 0..C {
                m.0[j][i] = self.0[i][j];
            }
        }
        m
    }

    /// Row echelon form (reduced) and the pivot columns.
    fn rref(&self, field: &Field) -> (Self, Vec<usize>) {
        let mut m = *self;
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..C {
            if row == R {
                break;
            }
            let Some(p) = (row..R).find(|&r| !m.0[r][col].is_zero()) else {
                continue;
            };
            m.0.swap(row, p);
            let inv = field.inv_nz(m.0[row][col]);
            for e in m.0[row].iter_mut() {
                *e = field.mul(*e, inv);
            }
            for r in 0..R {
                let factor = m.0[r][col];
                if r != row && !factor.is_zero() {
                    for c in 0..C {
                        let sub = field.mul(factor, m.0[row][c]);
                        m.0[r][c] = field.sub(m.0[r][c], sub);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, field: &Field) -> usize {
        self.rref(field).1.len()
    }

    /// A basis of `{v : M v = 0}`, one vector per free column, each with a
    /// 1 in its free position.
    pub fn nullspace(&self, field: &Field) -> Vec<[Elem; C]> {
        let (r, pivots) = self.rref(field);
        (0..C)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = [Elem::ZERO; C];
                v[free] = Elem::ONE;
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = field.neg(r.0[row][free]);
                }
                v
            })
            .collect()
    }
}

impl<const N: usize> Matrix<N, N> {
    pub fn identity() -> Self {
        let mut m = Self::ZERO;
        for i in 0..N {
            m.0[i][i] = Elem::ONE;
        }
        m
    }

    pub fn scalar(field: &Field, c: Elem) -> Self {
        Self::identity().scale(field, c)
    }

    pub fn diagonal(entries: [Elem; N]) -> Self {
        let mut m = Self::ZERO;
        for (i, e) in entries.into_iter().enumerate() {
            m.0[i][i] = e;
        }
        m
    }

    /// From column vectors.
    pub fn from_columns(cols: [[Elem; N]; N]) -> Self {
        Matrix(cols).transpose()
    }

    pub fn is_scalar(&self) -> bool {
        (0..N).all(|i| (0..N).all(|j| self.0[i][j] == if i == j { self.0[0][0] } else { Elem::ZERO }))
    }

    pub fn trace(&self, field: &Field) -> Elem {
        (0..N).fold(Elem::ZERO, |acc, i| field.add(acc, self.0[i][i]))
    }

    pub fn det(&self, field: &Field) -> Elem {
        let mut m = *self;
        let mut det = Elem::ONE;
        for col in 0..N {
            let Some(p) = (col..N).find(|&r| !m.0[r][col].is_zero()) else {
                return Elem::ZERO;
            };
            if p != col {
                m.0.swap(p, col);
                det = field.neg(det);
            }
            let pivot = m.0[col][col];
            det = field.mul(det, pivot);
            let inv = field.inv_nz(pivot);
            for r in col + 1..N {
                let factor = field.mul(m.0[r][col], inv);
                if !factor.is_zero() {
                    for c in col..N {
                        let sub = field.mul(factor, m.0[col][c]);
                        m.0[r][c] = field.sub(m.0[r][c], sub);
                    }
                }
            }
        }
        det
    }

    pub fn inverse(&self, field: &Field) -> Result<Self> {
        let mut a = *self;
        let mut inv = Self::identity();
        for col in 0..N {
            let p = (col..N)
                .find(|&r| !a.0[r][col].is_zero())
                .ok_or(Error::SingularMatrix)?;
            a.0.swap(p, col);
            inv.0.swap(p, col);
            let s = field.inv_nz(a.0[col][col]);
            for c in 0..N {
                a.0[col][c] = field.mul(a.0[col][c], s);
                inv.0[col][c] = field.mul(inv.0[col][c], s);
            }
            for r in 0..N {
                let factor = a.0[r][col];
                if r != col && !factor.is_zero() {
                    for c in 0..N {
                        a.0[r][c] = field.sub(a.0[r][c], field.mul(factor, a.0[col][c]));
                        inv.0[r][c] = field.sub(inv.0[r][c], field.mul(factor, inv.0[col][c]));
                    }
                }
            }
        }
        Ok(inv)
    }

    pub fn pow(&self, field: &Field, n: u32) -> Self {
        (0..n).fold(Self::identity(), |acc, _| acc.mul(field, self))
    }
}

impl<const R: usize, const C: usize> fmt::Debug for Matrix<R, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            for (j, e) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{e}")?;
            }
        }
        write!(f, "]")
    }
}

/// Row-major integer array.
impl<const R: usize, const C: usize> Serialize for Matrix<R, C> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_ints().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m3(f: &Field, v: [i64; 9]) -> Matrix3 {
        let ints: Vec<u32> = v.iter().map(|&x| f.from_i64(x).to_int()).collect();
        Matrix3::from_ints(f, &ints).unwrap()
    }

    #[test]
    fn index_round_trip() {
        let f = Field::from_order(3).unwrap();
        for idx in [0, 1, 2, 3, 100, 19682] {
            let m = Matrix3::from_index(&f, idx);
            assert_eq!(m.index(&f), idx);
        }
        let m = Matrix3::from_index(&f, 1);
        assert_eq!(m.to_ints(), vec![0, 0, 0, 0, 0, 0, 0, 0, 1]);
    }

    #[test]
    fn from_ints_validates() {
        let f = Field::from_order(3).unwrap();
        assert!(matches!(
            Matrix3::from_ints(&f, &[0; 8]),
            Err(Error::MatrixShape { expected: 9, found: 8 })
        ));
        assert!(Matrix23::from_ints(&f, &[0, 0, 0, 0, 0, 3]).is_err());
    }

    #[test]
    fn inverse_and_det_over_gf3() {
        let f = Field::from_order(3).unwrap();
        let mut invertible = 0;
        for idx in 0..Matrix3::count(&f) {
            let m = Matrix3::from_index(&f, idx);
            match m.inverse(&f) {
                Ok(inv) => {
                    invertible += 1;
                    assert!(!m.det(&f).is_zero());
                    assert_eq!(m.mul(&f, &inv), Matrix3::identity());
                    assert_eq!(m.rank(&f), 3);
                }
                Err(e) => {
                    assert_eq!(e, Error::SingularMatrix);
                    assert!(m.det(&f).is_zero());
                    assert!(m.rank(&f) < 3);
                }
            }
        }
        // |GL(3, F_3)| = (27 - 1)(27 - 3)(27 - 9)
        assert_eq!(invertible, 26 * 24 * 18);
    }

    #[test]
    fn det_is_multiplicative() {
        let f = Field::from_order(5).unwrap();
        let a = m3(&f, [1, 2, 3, 0, 4, 1, 2, 2, 0]);
        let b = m3(&f, [3, 0, 1, 1, 1, 1, 4, 0, 2]);
        assert_eq!(a.mul(&f, &b).det(&f), f.mul(a.det(&f), b.det(&f)));
    }

    #[test]
    fn nullspace_vectors_are_killed() {
        let f = Field::from_order(4).unwrap();
        for idx in (0..Matrix3::count(&f)).step_by(97) {
            let m = Matrix3::from_index(&f, idx);
            let ns = m.nullspace(&f);
            assert_eq!(ns.len(), 3 - m.rank(&f));
            for v in ns {
                assert_eq!(m.mul_vec(&f, &v), [Elem::ZERO; 3]);
            }
        }
    }

    #[test]
    fn rectangular_rank() {
        let f = Field::from_order(7).unwrap();
        let m = Matrix23::from_ints(&f, &[0, 0, 3, 0, 0, 5]).unwrap();
        assert_eq!(m.rank(&f), 1);
        let m = Matrix23::from_ints(&f, &[0, 1, 0, 0, 0, 1]).unwrap();
        assert_eq!(m.rank(&f), 2);
        assert_eq!(Matrix23::ZERO.rank(&f), 0);
    }
}
