use std::cmp::Ordering;

use num_traits::{One, Zero};

use super::polynomial::Term;
use super::{Monomial, MonomialOrder, Polynomial};
use crate::arith::Rational;
use crate::error::{Error, Result};

/// A divisor prepared for repeated reduction: terms sorted for the active
/// order, leading monomial and its divisibility signature cached.
#[derive(Clone, Debug)]
pub struct Divisor {
    pub(crate) terms: Vec<Term>,
    pub(crate) sig: u64,
}

impl Divisor {
    /// Panics on the zero polynomial.
    pub fn new(p: &Polynomial, order: &MonomialOrder) -> Self {
        assert!(!p.is_zero(), "zero divisor");
        let terms = p.terms_in(order);
        let sig = terms[0].0.signature();
        Divisor { terms, sig }
    }

    pub fn lead(&self) -> &Monomial {
        &self.terms[0].0
    }

    pub fn lead_coeff(&self) -> &Rational {
        &self.terms[0].1
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }
}

pub(crate) fn find_divisor(divs: &[Divisor], m: &Monomial) -> Option<usize> {
    let s = m.signature();
    divs.iter().position(|d| d.sig & !s == 0 && d.lead().divides(m))
}

/// `a - c * q * b`, all lists descending in `order`.
fn sub_shifted(a: &[Term], c: &Rational, q: &Monomial, b: &[Term], order: &MonomialOrder) -> Vec<Term> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    for (u, v) in b {
        let w = u.mul(q);
        while i < a.len() && order.cmp(&a[i].0, &w) == Ordering::Greater {
            out.push(a[i].clone());
            i += 1;
        }
        if i < a.len() && a[i].0 == w {
            let s = &a[i].1 - c * v;
            if !s.is_zero() {
                out.push((w, s));
            }
            i += 1;
        } else {
            out.push((w, -(c * v)));
        }
    }
    out.extend_from_slice(&a[i..]);
    out
}

/// Multivariate division of a descending term list. With `full == false`
/// only the head is reduced (stop at the first irreducible leading term).
/// Quotient terms are appended per divisor when `quotients` is given.
pub(crate) fn reduce_terms(
    mut p: Vec<Term>,
    divs: &[Divisor],
    order: &MonomialOrder,
    full: bool,
    mut quotients: Option<&mut Vec<Vec<Term>>>,
) -> Vec<Term> {
    let mut rem = Vec::new();
    let mut start = 0;
    while start < p.len() {
        let (m, c) = &p[start];
        match find_divisor(divs, m) {
            Some(k) => {
                let d = &divs[k];
                let q = d.lead().quotient_of(m).expect("divisor found");
                let coef = c / d.lead_coeff();
                p = sub_shifted(&p[start + 1..], &coef, &q, &d.terms[1..], order);
                start = 0;
                if let Some(qs) = quotients.as_deref_mut() {
                    qs[k].push((q, coef));
                }
            }
            None if full => {
                rem.push(p[start].clone());
                start += 1;
            }
            None => {
                rem.extend(p.drain(start..));
                break;
            }
        }
    }
    rem
}

/// `(quotients, remainder)` with `dividend = sum q_i d_i + r` and no term of
/// `r` divisible by a leading term of a divisor. Divisors are tried in the
/// given order at every step.
pub fn divide(dividend: &Polynomial, divisors: &[Polynomial], order: &MonomialOrder) -> Result<(Vec<Polynomial>, Polynomial)> {
    if divisors.iter().any(Polynomial::is_zero) {
        return Err(Error::DivisionByZero);
    }
    let divs: Vec<Divisor> = divisors.iter().map(|d| Divisor::new(d, order)).collect();
    let mut qs = vec![Vec::new(); divs.len()];
    let rem = reduce_terms(dividend.terms_in(order), &divs, order, true, Some(&mut qs));
    let quotients: Vec<Polynomial> = qs.into_iter().map(Polynomial::from_distinct_terms).collect();
    let remainder = Polynomial::from_distinct_terms(rem);
    if cfg!(test) {
        let recombined = quotients.iter().zip(divisors).fold(remainder.clone(), |s, (q, d)| &s + &(q * d));
        assert_eq!(&recombined, dividend, "division identity violated");
    }
    Ok((quotients, remainder))
}

/// `p / d` when `d` divides `p`.
pub fn divide_exact(p: &Polynomial, d: &Polynomial) -> Result<Polynomial> {
    let (mut q, r) = divide(p, std::slice::from_ref(d), &MonomialOrder::Grevlex)?;
    if r.is_zero() {
        Ok(q.pop().expect("one quotient"))
    } else {
        Err(Error::NotDivisible)
    }
}

/// `lcm/lt(p) * p - lcm/lt(q) * q` with monic leading terms.
pub fn s_polynomial(p: &Polynomial, q: &Polynomial, order: &MonomialOrder) -> Polynomial {
    let (lp, cp) = p.leading_term(order).expect("nonzero");
    let (lq, cq) = q.leading_term(order).expect("nonzero");
    let l = lp.lcm(lq);
    let a = p.mul_term(&lp.quotient_of(&l).unwrap(), &(Rational::one() / cp));
    let b = q.mul_term(&lq.quotient_of(&l).unwrap(), &(Rational::one() / cq));
    &a - &b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::poly::Var;

    // x > y > z as x[1,1] > x[1,2] > x[1,3].
    fn xyz() -> (Polynomial, Polynomial, Polynomial) {
        (Polynomial::var(Var::x(1, 1)), Polynomial::var(Var::x(1, 2)), Polynomial::var(Var::x(1, 3)))
    }

    #[test]
    fn exact_quotients() {
        let (x, y, _) = xyz();
        let p = &(&x * &x) - &(&y * &y);
        let (q, r) = divide(&p, &[&x - &y], &MonomialOrder::Grevlex).unwrap();
        assert!(r.is_zero());
        assert_eq!(q[0], &x + &y);
        assert_eq!(divide_exact(&p, &(&x - &y)).unwrap(), &x + &y);
    }

    #[test]
    fn remainders() {
        let (x, y, _) = xyz();
        let p = &(&x * &x) + &y;
        let (q, r) = divide(&p, std::slice::from_ref(&x), &MonomialOrder::Grevlex).unwrap();
        assert_eq!(r, y);
        assert_eq!(q[0], x);
        assert_eq!(divide_exact(&p, &x), Err(Error::NotDivisible));
        assert_eq!(divide(&p, &[Polynomial::zero()], &MonomialOrder::Lex).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn division_under_lex() {
        let (x, y, z) = xyz();
        let p = &(&(&x * &y) * &z) + &(&(&y * &y) * &int(3).into_poly());
        let divs = [&y * &z - x.clone(), &x + &z];
        let (q, r) = divide(&p, &divs, &MonomialOrder::Lex).unwrap();
        let back = &(&(&q[0] * &divs[0]) + &(&q[1] * &divs[1])) + &r;
        assert_eq!(back, p);
    }

    #[test]
    fn s_polynomials() {
        let (x, y, z) = xyz();
        let s = s_polynomial(&(&x - &y), &(&x - &z), &MonomialOrder::Grevlex);
        assert_eq!(s, &z - &y);
        assert!(s_polynomial(&(&x - &y), &(&x - &y), &MonomialOrder::Grevlex).is_zero());
    }

    trait IntoPoly {
        fn into_poly(self) -> Polynomial;
    }
    impl IntoPoly for Rational {
        fn into_poly(self) -> Polynomial {
            Polynomial::constant(self)
        }
    }
}
