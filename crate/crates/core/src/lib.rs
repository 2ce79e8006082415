//! Plane-filling curves of degree `q + 2` and affine-plane filling curves
//! of degree `q + 1` over finite fields, with a brute-force oracle that
//! checks their predicted decompositions.

pub mod affine;
pub mod atlas;
pub mod error;
pub mod geometry;
pub mod gf;
pub mod homog;
pub mod matrix;
pub mod plane;
pub mod poly;
pub mod verify;

pub use error::{Error, Result};
pub use gf::{Elem, Field, FieldSpec};
pub use homog::HomogPoly;
pub use matrix::{Matrix2, Matrix23, Matrix3};
