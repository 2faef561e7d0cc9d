//! Exact scalars and dense/sparse exact linear algebra.
//!
//! Two scalar fields are provided: arbitrary-precision rationals
//! ([`Rational`]) and real quadratic extensions `Q(sqrt(D))` ([`QuadExt`]).
//! Both implement [`Scalar`], which is what the matrix and geometry code is
//! generic over. Signs and comparisons are always decided exactly.

mod io;
mod matrix;
mod quad;
mod sparse;

pub use io::{
    matrix_from_csv, matrix_from_json, matrix_to_csv, matrix_to_json, parse_rational,
    rational_to_string, AnyMatrix,
};
pub use matrix::{Matrix, Solution};
pub use quad::QuadExt;
pub use sparse::{sparse_row_from_pairs, SparseEchelon, SparseRow};

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// An exact ordered field element.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + Eq
    + PartialOrd
    + Ord
    + std::hash::Hash
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_rational(r: Rational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// Exact sign: -1, 0 or 1.
    fn signum_i8(&self) -> i8;

    /// Approximate value, used only for rendering.
    fn to_f64(&self) -> f64;

    /// Canonical exact text form (see [`rational_to_string`]).
    fn to_exact_string(&self) -> String;

    fn parse_exact(s: &str) -> Result<Self>;

    fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.clone() / rhs.clone())
        }
    }

    fn is_positive_exact(&self) -> bool {
        self.signum_i8() > 0
    }

    fn is_negative_exact(&self) -> bool {
        self.signum_i8() < 0
    }
}

impl Scalar for Rational {
    fn from_rational(r: Rational) -> Self {
        r
    }

    fn signum_i8(&self) -> i8 {
        if self.is_zero() {
            0
        } else if self.is_positive() {
            1
        } else {
            -1
        }
    }

    fn to_f64(&self) -> f64 {
        ratio_to_f64(self)
    }

    fn to_exact_string(&self) -> String {
        rational_to_string(self)
    }

    fn parse_exact(s: &str) -> Result<Self> {
        parse_rational(s)
    }
}

pub(crate) fn ratio_to_f64(r: &Rational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Scale both down until they fit.
            let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
            let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
            n / d
        }
    }
}

/// Integer as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n / d` in lowest terms. Panics if `d == 0`.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Uniform sample with numerator in `[-100, 100]` and denominator in `[1, 100]`.
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    let n: i64 = rng.random_range(-100..=100);
    let d: i64 = rng.random_range(1..=100);
    frac(n, d)
}

/// Like [`random_rational`] but never zero.
pub fn random_nonzero_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    loop {
        let r = random_rational(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

/// Positive sample with numerator in `[1, 100]` and denominator in `[1, 100]`.
pub fn random_positive_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    let n: i64 = rng.random_range(1..=100);
    let d: i64 = rng.random_range(1..=100);
    frac(n, d)
}

/// Exact comparison helper usable on any scalar.
pub fn cmp_exact<T: Scalar>(a: &T, b: &T) -> Ordering {
    (a.clone() - b.clone()).signum_i8().cmp(&0)
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// via continued fractions.
pub fn rational_approx(x: f64, max_den: u64) -> Rational {
    assert!(x.is_finite(), "cannot approximate a non-finite value");
    let max_den = max_den.max(1);
    let (mut h0, mut h1): (i128, i128) = (0, 1);
    let (mut k0, mut k1): (i128, i128) = (1, 0);
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac_part = rest - a;
        if frac_part.abs() < 1e-18 {
            break;
        }
        rest = 1.0 / frac_part;
    }
    Rational::new(BigInt::from(h1), BigInt::from(k1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_field_basics() {
        assert_eq!(frac(1, 2) + frac(1, 3), frac(5, 6));
        assert_eq!(frac(2, -4), frac(-1, 2));
        assert_eq!(frac(0, 7).denom(), &BigInt::from(1));
        assert_eq!(frac(-3, 4).signum_i8(), -1);
    }

    #[test]
    fn checked_div_rejects_zero() {
        assert_eq!(int(1).checked_div(&int(0)), Err(Error::DivisionByZero));
        assert_eq!(int(1).checked_div(&int(4)), Ok(frac(1, 4)));
    }

    #[test]
    fn continued_fraction_approximation() {
        assert_eq!(rational_approx(std::f64::consts::PI, 1000), frac(355, 113));
        assert_eq!(rational_approx(0.5, 10), frac(1, 2));
        assert_eq!(rational_approx(-1.25, 10), frac(-5, 4));
    }
}
