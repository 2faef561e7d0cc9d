use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which family a variable belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// Matrix entries `x[i,j]`.
    X,
    /// Left factor entries `a[i,k]`, `k <= 3`.
    A,
    /// Right factor entries `b[k,j]`, `k <= 3`.
    B,
}

/// A variable `x[i,j]`, `a[i,k]` or `b[k,j]` with 1-based indices.
///
/// The derived ordering is the canonical variable order: x before a before b,
/// row-major within a family. A variable that sorts first is the *largest*
/// variable for the monomial orders, so `x[1,1] > x[1,2] > ... > x[2,1]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u32);

impl Var {
    fn pack(family: Family, i: usize, j: usize) -> Var {
        assert!((1..256).contains(&i) && (1..256).contains(&j), "variable index out of range");
        let tag = match family {
            Family::X => 0,
            Family::A => 1,
            Family::B => 2,
        };
        Var(tag << 16 | (i as u32) << 8 | j as u32)
    }

    pub fn new(family: Family, i: usize, j: usize) -> Var {
        Self::pack(family, i, j)
    }

    pub fn x(i: usize, j: usize) -> Var {
        Self::pack(Family::X, i, j)
    }

    pub fn a(i: usize, k: usize) -> Var {
        assert!(k <= 3, "a-variables have column index <= 3");
        Self::pack(Family::A, i, k)
    }

    pub fn b(k: usize, j: usize) -> Var {
        assert!(k <= 3, "b-variables have row index <= 3");
        Self::pack(Family::B, k, j)
    }

    pub fn family(self) -> Family {
        match self.0 >> 16 {
            0 => Family::X,
            1 => Family::A,
            _ => Family::B,
        }
    }

    /// `(row, column)`, 1-based.
    pub fn indices(self) -> (usize, usize) {
        (((self.0 >> 8) & 0xff) as usize, (self.0 & 0xff) as usize)
    }

    pub fn row(self) -> usize {
        self.indices().0
    }

    pub fn col(self) -> usize {
        self.indices().1
    }

    pub fn id(self) -> u32 {
        self.0
    }

    /// Parse `x[i,j]`, `a[i,k]` or `b[k,j]`.
    pub fn parse(s: &str) -> Result<Var> {
        let bad = || Error::Parse(format!("not a variable: `{s}`"));
        let s = s.trim();
        let family = match s.chars().next() {
            Some('x') => Family::X,
            Some('a') => Family::A,
            Some('b') => Family::B,
            _ => return Err(bad()),
        };
        let inner = s[1..].trim().strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
        let (i, j) = inner.split_once(',').ok_or_else(bad)?;
        let i: usize = i.trim().parse().map_err(|_| bad())?;
        let j: usize = j.trim().parse().map_err(|_| bad())?;
        if !(1..256).contains(&i) || !(1..256).contains(&j) {
            return Err(Error::OutOfRange(s.to_string()));
        }
        if (family == Family::A && j > 3) || (family == Family::B && i > 3) {
            return Err(Error::OutOfRange(s.to_string()));
        }
        Ok(Self::pack(family, i, j))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (i, j) = self.indices();
        let c = match self.family() {
            Family::X => 'x',
            Family::A => 'a',
            Family::B => 'b',
        };
        write!(f, "{c}[{i},{j}]")
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A named variable space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VariableSpace {
    /// `x[i,j]`, `i <= m`, `j <= n`.
    X { m: usize, n: usize },
    /// `a[i,k]`, `i <= m`, `k <= 3`.
    A { m: usize },
    /// `b[k,j]`, `k <= 3`, `j <= n`.
    B { n: usize },
}

impl VariableSpace {
    /// All variables in canonical order.
    pub fn variables(&self) -> Vec<Var> {
        let (fam, r, c) = match *self {
            VariableSpace::X { m, n } => (Family::X, m, n),
            VariableSpace::A { m } => (Family::A, m, 3),
            VariableSpace::B { n } => (Family::B, 3, n),
        };
        (1..=r).flat_map(|i| (1..=c).map(move |j| Var::new(fam, i, j))).collect()
    }

    pub fn contains(&self, v: Var) -> bool {
        let (i, j) = v.indices();
        match *self {
            VariableSpace::X { m, n } => v.family() == Family::X && i <= m && j <= n,
            VariableSpace::A { m } => v.family() == Family::A && i <= m && j <= 3,
            VariableSpace::B { n } => v.family() == Family::B && i <= 3 && j <= n,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_is_row_major_x_then_a_then_b() {
        let mut vs = VariableSpace::X { m: 2, n: 3 }.variables();
        vs.extend(VariableSpace::A { m: 2 }.variables());
        vs.extend(VariableSpace::B { n: 2 }.variables());
        let mut sorted = vs.clone();
        sorted.sort();
        assert_eq!(vs, sorted);
        assert!(Var::x(1, 2) < Var::x(2, 1));
        assert!(Var::x(9, 9) < Var::a(1, 1));
        assert!(Var::a(9, 3) < Var::b(1, 1));
    }

    #[test]
    fn ids_round_trip() {
        for v in [Var::x(3, 7), Var::a(5, 2), Var::b(3, 11)] {
            assert_eq!(Var::parse(&v.to_string()).unwrap(), v);
        }
        assert_eq!(Var::x(4, 6).indices(), (4, 6));
        assert!(Var::parse("a[1,4]").is_err());
        assert!(Var::parse("y[1,1]").is_err());
        assert!(VariableSpace::X { m: 4, n: 6 }.contains(Var::x(4, 6)));
        assert!(!VariableSpace::X { m: 4, n: 6 }.contains(Var::x(5, 1)));
    }
}
