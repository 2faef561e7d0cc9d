use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{parse_rational, ratio_to_f64, rational_to_string, Rational, Scalar};
use crate::error::{Error, Result};

const fn is_squarefree(d: u64) -> bool {
    if d < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= d {
        if d % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// Element `a + b*sqrt(D)` of the real quadratic field `Q(sqrt(D))`.
///
/// `D` is fixed by the type, so all elements of one computation share it.
/// Ordering is the one induced by the real embedding with `sqrt(D) > 0`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadExt<const D: u64> {
    a: Rational,
    b: Rational,
}

impl<const D: u64> QuadExt<D> {
    const VALID: () = assert!(is_squarefree(D), "QuadExt requires a square-free D > 1");

    pub fn new(a: Rational, b: Rational) -> Self {
        #[allow(clippy::let_unit_value)]
        let _ = Self::VALID;
        QuadExt { a, b }
    }

    /// `sqrt(D)` itself.
    pub fn sqrt_d() -> Self {
        Self::new(Rational::zero(), Rational::one())
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn irrational_part(&self) -> &Rational {
        &self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        Self::new(self.a.clone(), -self.b.clone())
    }

    /// Field norm `a^2 - D b^2`; zero only for the zero element.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - Rational::from_integer(D.into()) * &self.b * &self.b
    }

    fn sign(&self) -> i8 {
        let sa = self.a.signum_i8();
        let sb = self.b.signum_i8();
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // Opposite signs: compare a^2 against D b^2.
        let a2 = &self.a * &self.a;
        let db2 = Rational::from_integer(D.into()) * &self.b * &self.b;
        match a2.cmp(&db2) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => unreachable!("sqrt(D) is irrational"),
        }
    }
}

impl<const D: u64> fmt::Debug for QuadExt<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_exact_string())
    }
}

impl<const D: u64> fmt::Display for QuadExt<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_exact_string())
    }
}

impl<const D: u64> From<Rational> for QuadExt<D> {
    fn from(r: Rational) -> Self {
        Self::new(r, Rational::zero())
    }
}

impl<const D: u64> Zero for QuadExt<D> {
    fn zero() -> Self {
        Self::new(Rational::zero(), Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl<const D: u64> One for QuadExt<D> {
    fn one() -> Self {
        Self::new(Rational::one(), Rational::zero())
    }
}

impl<const D: u64> Neg for QuadExt<D> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b)
    }
}

impl<const D: u64> Add for QuadExt<D> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl<const D: u64> Sub for QuadExt<D> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl<const D: u64> Mul for QuadExt<D> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let d = Rational::from_integer(D.into());
        let a = &self.a * &rhs.a + d * &self.b * &rhs.b;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        Self::new(a, b)
    }
}

impl<const D: u64> Div for QuadExt<D> {
    type Output = Self;
    /// Panics on division by zero; use [`Scalar::checked_div`] to get an error.
    fn div(self, rhs: Self) -> Self {
        let n = rhs.norm();
        assert!(!n.is_zero(), "division by zero in Q(sqrt({D}))");
        let num = self * rhs.conjugate();
        Self::new(num.a / &n, num.b / n)
    }
}

impl<const D: u64> PartialOrd for QuadExt<D> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<const D: u64> Ord for QuadExt<D> {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).sign().cmp(&0)
    }
}

impl<const D: u64> Scalar for QuadExt<D> {
    fn from_rational(r: Rational) -> Self {
        r.into()
    }

    fn signum_i8(&self) -> i8 {
        self.sign()
    }

    fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.a) + ratio_to_f64(&self.b) * (D as f64).sqrt()
    }

    /// `a` when rational, otherwise `a+b*sqrt(D)` (or `a-|b|*sqrt(D)`).
    fn to_exact_string(&self) -> String {
        if self.b.is_zero() {
            return rational_to_string(&self.a);
        }
        let sep = if self.b.is_negative() { "-" } else { "+" };
        format!(
            "{}{}{}*sqrt({})",
            rational_to_string(&self.a),
            sep,
            rational_to_string(&self.b.abs()),
            D
        )
    }

    fn parse_exact(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(rest) = t.strip_suffix(')') else {
            return parse_rational(&t).map(Self::from);
        };
        let (head, d) = rest
            .rsplit_once("*sqrt(")
            .ok_or_else(|| Error::Parse(format!("malformed quadratic element `{s}`")))?;
        let d: u64 = d
            .parse()
            .map_err(|_| Error::Parse(format!("bad radicand in `{s}`")))?;
        if d != D {
            return Err(Error::Parse(format!("expected sqrt({D}), found sqrt({d}) in `{s}`")));
        }
        // Split at the last top-level sign that is not the leading one and
        // not part of an exponent-free rational like "-1/2".
        let bytes = head.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'+' && bytes[i - 1] != b'-');
        let (a, b) = match split {
            Some(i) => {
                let a = parse_rational(&head[..i])?;
                let mut b = parse_rational(head[i..].trim_start_matches('+'))?;
                if head[i..].starts_with("+-") {
                    b = -b.abs();
                }
                (a, b)
            }
            None => (Rational::zero(), parse_rational(head)?),
        };
        Ok(Self::new(a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{frac, int};

    type Q2 = QuadExt<2>;

    fn q(a: Rational, b: Rational) -> Q2 {
        Q2::new(a, b)
    }

    #[test]
    fn conjugate_product() {
        let x = q(int(1), int(1));
        let y = q(int(1), int(-1));
        assert_eq!(x * y, Q2::from(int(-1)));
    }

    #[test]
    fn signs_by_case_analysis() {
        assert_eq!(q(int(1), int(-1)).signum_i8(), -1);
        assert_eq!(q(int(-1), int(1)).signum_i8(), 1);
        assert_eq!(q(int(3), int(-2)).signum_i8(), 1); // 9 > 8
        assert_eq!(q(int(-3), int(2)).signum_i8(), -1);
        assert_eq!(q(int(0), int(0)).signum_i8(), 0);
        assert_eq!(q(int(0), frac(-1, 7)).signum_i8(), -1);
    }

    #[test]
    fn division_inverts_multiplication() {
        let x = q(frac(3, 5), int(-2));
        let y = q(int(7), frac(1, 3));
        assert_eq!((x.clone() * y.clone()) / y.clone(), x);
        assert_eq!(x.checked_div(&Q2::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn text_round_trip() {
        for s in ["1/2+3*sqrt(2)", "-1+1*sqrt(2)", "0-5/7*sqrt(2)", "4/9"] {
            let x = Q2::parse_exact(s).unwrap();
            assert_eq!(x.to_exact_string(), s);
        }
        let x = Q2::parse_exact("1/2+-3*sqrt(2)").unwrap();
        assert_eq!(x, q(frac(1, 2), int(-3)));
        assert!(Q2::parse_exact("1+1*sqrt(3)").is_err());
    }
}
