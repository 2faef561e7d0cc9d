//! Exact algebra and planar geometry for matrices of nonnegative rank at
//! most three.
//!
//! * [`arith`]: rationals, `Q(sqrt d)`, exact dense and sparse elimination.
//! * [`poly`]: sparse polynomials, monomial orders, division.
//! * [`groebner`]: Buchberger's algorithm, verification, normal forms.
//! * [`boundary`]: generators of the ideal of a boundary component and checks.
//! * [`geometry`]: nested polygons, candidate triangles, rank-3 decisions.

pub mod arith;
pub mod error;
pub mod geometry;
pub mod boundary;
pub mod groebner;
pub mod poly;

pub use arith::{AnyMatrix, Matrix, QuadExt, Rational, Scalar};
pub use error::{Error, Result};
pub use poly::{Monomial, MonomialOrder, MultiDegree, Polynomial, Var};
