use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{Family, Monomial, MonomialOrder, Var};
use crate::arith::{Rational, Scalar};
use crate::error::{Error, Result};

pub type Term = (Monomial, Rational);

/// Sparse polynomial with rational coefficients.
///
/// Terms are kept sorted in descending grevlex order with no zero
/// coefficients, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: Vec<Term>,
}

/// Row and column degree vectors of an x-space monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiDegree {
    pub rows: Vec<u32>,
    pub cols: Vec<u32>,
}

impl Add for &MultiDegree {
    type Output = MultiDegree;
    fn add(self, rhs: &MultiDegree) -> MultiDegree {
        let zip = |a: &[u32], b: &[u32]| {
            let n = a.len().max(b.len());
            (0..n).map(|i| a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)).collect()
        };
        MultiDegree { rows: zip(&self.rows, &rhs.rows), cols: zip(&self.cols, &rhs.cols) }
    }
}

pub(crate) fn sort_desc(terms: &mut [Term], order: &MonomialOrder) {
    terms.sort_unstable_by(|a, b| order.cmp(&b.0, &a.0));
}

/// Merge two descending term lists, computing `a + c * b`.
pub(crate) fn merge_axpy(a: &[Term], c: &Rational, b: &[Term], order: &MonomialOrder) -> Vec<Term> {
    use std::cmp::Ordering::*;
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match order.cmp(&a[i].0, &b[j].0) {
            Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Less => {
                out.push((b[j].0.clone(), c * &b[j].1));
                j += 1;
            }
            Equal => {
                let s = &a[i].1 + c * &b[j].1;
                if !s.is_zero() {
                    out.push((a[i].0.clone(), s));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend(b[j..].iter().map(|(m, v)| (m.clone(), c * v)));
    out
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn var(v: Var) -> Self {
        Self::term(Monomial::var(v), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Polynomial { terms: vec![(m, c)] }
        }
    }

    /// Collects like terms and drops zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = Term>) -> Self {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        let mut terms: Vec<Term> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        sort_desc(&mut terms, &MonomialOrder::Grevlex);
        Polynomial { terms }
    }

    /// Terms already combined (distinct monomials, nonzero coefficients);
    /// only the sort is redone.
    pub(crate) fn from_distinct_terms(mut terms: Vec<Term>) -> Self {
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        sort_desc(&mut terms, &MonomialOrder::Grevlex);
        Polynomial { terms }
    }

    /// Terms in descending grevlex order.
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Terms in descending order for `order`.
    pub fn terms_in(&self, order: &MonomialOrder) -> Vec<Term> {
        let mut t = self.terms.clone();
        if *order != MonomialOrder::Grevlex {
            sort_desc(&mut t, order);
        }
        t
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn leading_term(&self, order: &MonomialOrder) -> Option<&Term> {
        match order {
            MonomialOrder::Grevlex => self.terms.first(),
            _ => self.terms.iter().max_by(|a, b| order.cmp(&a.0, &b.0)),
        }
    }

    pub fn leading_coefficient(&self, order: &MonomialOrder) -> Option<&Rational> {
        self.leading_term(order).map(|t| &t.1)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.windows(2).all(|w| w[0].0.degree() == w[1].0.degree())
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.iter().flat_map(|(m, _)| m.vars()).collect()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    /// Divide through by the grevlex leading coefficient.
    pub fn monic(&self) -> Self {
        match self.terms.first() {
            Some((_, c)) if !c.is_one() => self.scale(&(Rational::one() / c)),
            _ => self.clone(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        // Multiplying by a monomial preserves any monomial order.
        Polynomial { terms: self.terms.iter().map(|(u, v)| (u.mul(m), v * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Exact evaluation; every variable must be assigned.
    pub fn evaluate<T: Scalar>(&self, point: impl Fn(Var) -> Option<T>) -> Result<T> {
        let mut cache: HashMap<Var, T> = HashMap::new();
        let mut total = T::zero();
        for (m, c) in &self.terms {
            let mut t = T::from_rational(c.clone());
            for &(v, e) in m.factors() {
                let x = match cache.get(&v) {
                    Some(x) => x.clone(),
                    None => {
                        let x = point(v).ok_or(Error::MissingAssignment(v))?;
                        cache.insert(v, x.clone());
                        x
                    }
                };
                for _ in 0..e {
                    t = t * x.clone();
                }
            }
            total = total + t;
        }
        Ok(total)
    }

    pub fn evaluate_map<T: Scalar>(&self, point: &HashMap<Var, T>) -> Result<T> {
        self.evaluate(|v| point.get(&v).cloned())
    }

    /// Replace variables by polynomials; unmapped variables are kept.
    pub fn substitute(&self, map: impl Fn(Var) -> Option<Polynomial>) -> Polynomial {
        let mut images: HashMap<Var, Vec<Polynomial>> = HashMap::new();
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in &self.terms {
            let mut prod = Polynomial::constant(c.clone());
            for &(v, e) in m.factors() {
                let powers = images.entry(v).or_insert_with(|| {
                    vec![Polynomial::one(), map(v).unwrap_or_else(|| Polynomial::var(v))]
                });
                while powers.len() <= e as usize {
                    let next = &powers[powers.len() - 1] * &powers[1];
                    powers.push(next);
                }
                prod = &prod * &powers[e as usize];
            }
            for (u, d) in prod.terms {
                *acc.entry(u).or_insert_with(Rational::zero) += d;
            }
        }
        Polynomial::from_distinct_terms(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }

    /// Rename variables by an injective map.
    pub fn map_vars(&self, f: impl Fn(Var) -> Var) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| (m.map_vars(&f), c.clone())))
    }

    /// Common degree vector of all terms under a grading that assigns each
    /// variable a slot, or `None` if the terms disagree. Variables mapped
    /// to `None` are ignored.
    pub fn graded_degree(&self, slot: impl Fn(Var) -> Option<usize>, len: usize) -> Option<Vec<u32>> {
        let mut common: Option<Vec<u32>> = None;
        for (m, _) in &self.terms {
            let mut d = vec![0u32; len];
            for &(v, e) in m.factors() {
                if let Some(s) = slot(v) {
                    d[s] += e;
                }
            }
            match &common {
                None => common = Some(d),
                Some(c) if *c != d => return None,
                _ => {}
            }
        }
        Some(common.unwrap_or_else(|| vec![0; len]))
    }

    /// Row and column multidegree of an x-space polynomial of an `m x n`
    /// matrix, or `None` when it is not multihomogeneous.
    pub fn multidegree(&self, m: usize, n: usize) -> Result<Option<MultiDegree>> {
        if let Some(v) = self.vars().into_iter().find(|v| v.family() != Family::X || v.row() > m || v.col() > n) {
            return Err(Error::OutOfRange(format!("{v} is not an x-variable of a {m}x{n} matrix")));
        }
        let rows = self.graded_degree(|v| Some(v.row() - 1), m);
        let cols = self.graded_degree(|v| Some(v.col() - 1), n);
        Ok(rows.zip(cols).map(|(rows, cols)| MultiDegree { rows, cols }))
    }

    /// `(degree in a, degree in b)` when bihomogeneous.
    pub fn bidegree(&self) -> Option<(u32, u32)> {
        let d = self.graded_degree(
            |v| match v.family() {
                Family::A => Some(0),
                Family::B => Some(1),
                Family::X => None,
            },
            2,
        )?;
        Some((d[0], d[1]))
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        Polynomial { terms: merge_axpy(&self.terms, &Rational::one(), &rhs.terms, &MonomialOrder::Grevlex) }
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        Polynomial { terms: merge_axpy(&self.terms, &-Rational::one(), &rhs.terms, &MonomialOrder::Grevlex) }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        if rhs.len() == 1 {
            return self.mul_term(&rhs.terms[0].0, &rhs.terms[0].1);
        }
        if self.len() == 1 {
            return rhs.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let mut acc: HashMap<Monomial, Rational> = HashMap::with_capacity(self.len() * rhs.len());
        for (u, a) in &self.terms {
            for (v, b) in &rhs.terms {
                *acc.entry(u.mul(v)).or_insert_with(Rational::zero) += a * b;
            }
        }
        Polynomial::from_distinct_terms(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl From<Var> for Polynomial {
    fn from(v: Var) -> Self {
        Polynomial::var(v)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::format::to_text(self))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
