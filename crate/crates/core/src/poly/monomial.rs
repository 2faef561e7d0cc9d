use std::fmt;

use smallvec::SmallVec;

use super::Var;

type Factors = SmallVec<[(Var, u32); 12]>;

/// A power product, stored as `(variable, exponent)` pairs sorted by the
/// canonical variable order with no zero exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    factors: Factors,
    degree: u32,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(v: Var) -> Self {
        Self::power(v, 1)
    }

    pub fn power(v: Var, e: u32) -> Self {
        if e == 0 {
            return Self::one();
        }
        let mut factors = Factors::new();
        factors.push((v, e));
        Monomial { factors, degree: e }
    }

    /// From arbitrary pairs; repeated variables are multiplied together.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut factors: Factors = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        factors.sort_unstable_by_key(|&(v, _)| v);
        let mut out = Factors::new();
        for (v, e) in factors {
            match out.last_mut() {
                Some((w, f)) if *w == v => *f += e,
                _ => out.push((v, e)),
            }
        }
        let degree = out.iter().map(|&(_, e)| e).sum();
        Monomial { factors: out, degree }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.factors
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.factors.iter().map(|&(v, _)| v)
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.factors
            .binary_search_by_key(&v, |&(w, _)| w)
            .map_or(0, |i| self.factors[i].1)
    }

    fn merge(&self, other: &Self, f: impl Fn(u32, u32) -> u32) -> Self {
        let (a, b) = (&self.factors, &other.factors);
        let mut out = Factors::new();
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let (v, e) = if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                i += 1;
                (a[i - 1].0, f(a[i - 1].1, 0))
            } else if i == a.len() || b[j].0 < a[i].0 {
                j += 1;
                (b[j - 1].0, f(0, b[j - 1].1))
            } else {
                i += 1;
                j += 1;
                (a[i - 1].0, f(a[i - 1].1, b[j - 1].1))
            };
            if e > 0 {
                out.push((v, e));
            }
        }
        let degree = out.iter().map(|&(_, e)| e).sum();
        Monomial { factors: out, degree }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if other.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return other.clone();
        }
        self.merge(other, |x, y| x + y)
    }

    pub fn lcm(&self, other: &Self) -> Self {
        self.merge(other, u32::max)
    }

    /// Whether `self` divides `other`.
    pub fn divides(&self, other: &Self) -> bool {
        if self.degree > other.degree || self.factors.len() > other.factors.len() {
            return false;
        }
        let b = &other.factors;
        let mut j = 0;
        for &(v, e) in &self.factors {
            while j < b.len() && b[j].0 < v {
                j += 1;
            }
            if j == b.len() || b[j].0 != v || b[j].1 < e {
                return false;
            }
            j += 1;
        }
        true
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Self) -> Option<Self> {
        if !self.divides(other) {
            return None;
        }
        Some(other.merge(self, |x, y| x - y))
    }

    /// No variable in common.
    pub fn coprime(&self, other: &Self) -> bool {
        let (a, b) = (&self.factors, &other.factors);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    /// Apply a variable relabelling; the result is re-sorted.
    pub fn map_vars(&self, f: impl Fn(Var) -> Var) -> Self {
        Self::from_pairs(self.factors.iter().map(|&(v, e)| (f(v), e)))
    }

    /// 64-bit signature: bit `h(v)` set for each variable. If `u | w` then
    /// `sig(u) & !sig(w) == 0`.
    pub fn signature(&self) -> u64 {
        self.factors.iter().fold(0, |s, &(v, _)| s | 1u64 << (v.id().wrapping_mul(0x9E37_79B9) >> 26))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        for (k, &(v, e)) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, " * ")?;
            }
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
