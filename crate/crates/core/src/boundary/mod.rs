//! The ideal of the boundary component `X_{m,n}`: zero patterns, the
//! pullback along `(A, B) -> A B`, the explicit sextic `f`, the factor
//! `f63`, sextics for every column triple, 4x4 minors, and checks.
//!
//! Variables: `x[i,j]` for the matrix, `a[i,k]` and `b[k,j]` for the
//! factors. The component is the closure of products `A B` where `A` has
//! zeros at (1,1), (2,1), (3,2), (4,3) and `B` at (1,1), (2,2), (3,3).

mod checks;
mod sextic;

pub use checks::*;
pub use sextic::*;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{random_rational, Matrix, Rational};
use crate::error::{Error, Result};
use crate::poly::{divide_exact, Family, Polynomial, Var, VariableSpace};

/// Positions (1-based) forced to zero in `A` (m x 3) and `B` (3 x n).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroPattern {
    pub a_zeros: BTreeSet<(usize, usize)>,
    pub b_zeros: BTreeSet<(usize, usize)>,
}

impl ZeroPattern {
    /// The pattern of `X_{m,n}`: the one annihilating [`base_sextic_f`].
    pub fn canonical() -> Self {
        ZeroPattern {
            a_zeros: [(1, 1), (2, 1), (3, 2), (4, 3)].into_iter().collect(),
            b_zeros: [(1, 3), (2, 1), (3, 2)].into_iter().collect(),
        }
    }

    /// Same zeros in `A`, diagonal zeros in `B`. `f` does not vanish on it.
    pub fn diagonal_b() -> Self {
        ZeroPattern {
            a_zeros: [(1, 1), (2, 1), (3, 2), (4, 3)].into_iter().collect(),
            b_zeros: [(1, 1), (2, 2), (3, 3)].into_iter().collect(),
        }
    }

    /// Pattern of the transposed component: `(A B)^T = B^T A^T`.
    pub fn transposed(&self) -> Self {
        ZeroPattern {
            a_zeros: self.b_zeros.iter().map(|&(k, j)| (j, k)).collect(),
            b_zeros: self.a_zeros.iter().map(|&(i, k)| (k, i)).collect(),
        }
    }

    /// Random factors with the pattern's zeros and the standard sampling
    /// distribution elsewhere.
    pub fn sample<R: Rng + ?Sized>(&self, m: usize, n: usize, rng: &mut R) -> (Matrix<Rational>, Matrix<Rational>) {
        let a = Matrix::from_fn(m, 3, |i, k| {
            if self.a_zeros.contains(&(i + 1, k + 1)) {
                Rational::zero()
            } else {
                random_rational(rng)
            }
        });
        let b = Matrix::from_fn(3, n, |k, j| {
            if self.b_zeros.contains(&(k + 1, j + 1)) {
                Rational::zero()
            } else {
                random_rational(rng)
            }
        });
        (a, b)
    }

    /// Free parameters of the pattern as `a`/`b` variables.
    pub fn free_parameters(&self, m: usize, n: usize) -> Vec<Var> {
        let a = VariableSpace::A { m }.variables().into_iter().filter(|v| !self.a_zeros.contains(&v.indices()));
        let b = VariableSpace::B { n }.variables().into_iter().filter(|v| !self.b_zeros.contains(&v.indices()));
        a.chain(b).collect()
    }
}

/// Unpatterned random factors.
pub fn sample_generic<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> (Matrix<Rational>, Matrix<Rational>) {
    let a = Matrix::from_fn(m, 3, |_, _| random_rational(rng));
    let b = Matrix::from_fn(3, n, |_, _| random_rational(rng));
    (a, b)
}

/// A 3-subset `{i < j < k}` of the columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ColumnTriple(pub [usize; 3]);

impl ColumnTriple {
    pub fn new(i: usize, j: usize, k: usize) -> Result<Self> {
        let mut t = [i, j, k];
        t.sort_unstable();
        if t[0] == 0 || t[0] == t[1] || t[1] == t[2] {
            return Err(Error::OutOfRange(format!("({i},{j},{k}) is not a triple of distinct columns")));
        }
        Ok(ColumnTriple(t))
    }

    pub fn all(n: usize) -> Vec<ColumnTriple> {
        let mut out = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                for k in j + 1..=n {
                    out.push(ColumnTriple([i, j, k]));
                }
            }
        }
        out
    }

    pub fn largest(&self) -> usize {
        self.0[2]
    }

    /// Parse `i,j,k`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<usize> = s
            .split(',')
            .map(|p| p.trim().parse().map_err(|_| Error::Parse(format!("bad triple `{s}`"))))
            .collect::<Result<_>>()?;
        match parts[..] {
            [i, j, k] => Self::new(i, j, k),
            _ => Err(Error::Parse(format!("bad triple `{s}`"))),
        }
    }
}

impl fmt::Display for ColumnTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.0[0], self.0[1], self.0[2])
    }
}

fn x(i: usize, j: usize) -> Polynomial {
    Polynomial::var(Var::x(i, j))
}

/// Determinant of a square grid of polynomials by Laplace expansion.
pub fn det_of(grid: &[Vec<Polynomial>]) -> Polynomial {
    let n = grid.len();
    if n == 1 {
        return grid[0][0].clone();
    }
    let mut total = Polynomial::zero();
    for c in 0..n {
        let minor: Vec<Vec<Polynomial>> = grid[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, p)| p.clone()).collect())
            .collect();
        let term = &grid[0][c] * &det_of(&minor);
        total = if c % 2 == 0 { &total + &term } else { &total - &term };
    }
    total
}

/// The explicit sextic in the entries of rows 1..4, columns 1..3.
pub fn base_sextic_f() -> &'static Polynomial {
    static F: OnceLock<Polynomial> = OnceLock::new();
    F.get_or_init(|| {
        let d12 = &(&x(1, 1) * &x(2, 2)) - &(&x(1, 2) * &x(2, 1));
        let d13 = &(&x(1, 1) * &x(2, 3)) - &(&x(1, 3) * &x(2, 1));
        let e = &(&x(1, 3) * &x(2, 2)) - &(&x(1, 2) * &x(2, 3));
        let g = &(&e * &x(3, 1)) - &(&d12 * &x(3, 3));
        let t1 = &(&(&d13 * &e) * &x(3, 2)) * &x(4, 1);
        let t2 = &(&d13 * &g) * &x(4, 2);
        let t3 = &(&d12 * &g) * &x(4, 3);
        &(&t1 - &t2) + &t3
    })
}

/// Image of `x[i,j]` under the pullback: `sum_k a[i,k] b[k,j]`.
pub fn mu_image(i: usize, j: usize) -> Polynomial {
    Polynomial::from_terms((1..=3).map(|k| {
        (crate::poly::Monomial::from_pairs([(Var::a(i, k), 1), (Var::b(k, j), 1)]), Rational::one())
    }))
}

/// Pull an x-polynomial of an `m x n` matrix back to the factor variables.
pub fn mu_pullback(p: &Polynomial, m: usize, n: usize) -> Result<Polynomial> {
    let space = VariableSpace::X { m, n };
    if let Some(v) = p.vars().into_iter().find(|v| !space.contains(*v)) {
        return Err(Error::OutOfRange(format!("{v} is not an x-variable of a {m}x{n} matrix")));
    }
    Ok(p.substitute(|v| Some(mu_image(v.row(), v.col()))))
}

/// The 3x3 determinant in `b` exactly as displayed with the factorization.
pub fn det_d() -> Polynomial {
    let b = |k: usize, j: usize| Polynomial::var(Var::b(k, j));
    let t = |p: [(usize, usize); 3]| &(&b(p[0].0, p[0].1) * &b(p[1].0, p[1].1)) * &b(p[2].0, p[2].1);
    let plus = [
        t([(1, 3), (2, 2), (3, 1)]),
        t([(1, 1), (2, 3), (3, 2)]),
        t([(1, 2), (2, 1), (3, 3)]),
    ];
    let minus = [
        t([(1, 2), (2, 3), (3, 1)]),
        t([(1, 3), (2, 1), (3, 2)]),
        t([(1, 1), (2, 2), (3, 3)]),
    ];
    let pos = plus.iter().fold(Polynomial::zero(), |s, p| &s + p);
    minus.iter().fold(pos, |s, p| &s - p)
}

/// `det (b[k, t_l])_{k,l}`.
pub fn det3_b(t: ColumnTriple) -> Polynomial {
    let grid: Vec<Vec<Polynomial>> =
        (1..=3).map(|k| t.0.iter().map(|&j| Polynomial::var(Var::b(k, j))).collect()).collect();
    det_of(&grid)
}

/// `det (a[r_l, k])_{l,k}` for three distinct rows.
pub fn det3_a(rows: [usize; 3]) -> Result<Polynomial> {
    let set: BTreeSet<usize> = rows.iter().copied().collect();
    if set.len() != 3 || rows.contains(&0) {
        return Err(Error::OutOfRange(format!("{rows:?} are not three distinct rows")));
    }
    let grid: Vec<Vec<Polynomial>> =
        rows.iter().map(|&i| (1..=3).map(|k| Polynomial::var(Var::a(i, k))).collect()).collect();
    Ok(det_of(&grid))
}

/// The 4x4 minor of the x-matrix on the given rows and columns.
pub fn minor4x4(rows: [usize; 4], cols: [usize; 4]) -> Result<Polynomial> {
    let distinct = |s: &[usize; 4]| s.iter().collect::<BTreeSet<_>>().len() == 4 && !s.contains(&0);
    if !distinct(&rows) || !distinct(&cols) || rows.iter().chain(&cols).any(|&v| v > 255) {
        return Err(Error::OutOfRange(format!("minor rows {rows:?} cols {cols:?}")));
    }
    let grid: Vec<Vec<Polynomial>> = rows.iter().map(|&i| cols.iter().map(|&j| x(i, j)).collect()).collect();
    Ok(det_of(&grid))
}

/// `mu^* f`, cached.
pub fn pullback_f() -> &'static Polynomial {
    static P: OnceLock<Polynomial> = OnceLock::new();
    P.get_or_init(|| mu_pullback(base_sextic_f(), 4, 3).expect("f lives on a 4x3 matrix"))
}

/// `f63 = mu^* f / D`, cached. Panics if the division is not exact.
pub fn compute_f63() -> &'static Polynomial {
    static P: OnceLock<Polynomial> = OnceLock::new();
    P.get_or_init(|| match divide_exact(pullback_f(), &det_d()) {
        Ok(q) => q,
        Err(e) => panic!("pullback of f is not divisible by D: {e}"),
    })
}

/// Degree of `p` in the `a`-variables of each row 1..=m.
pub fn a_row_degrees(p: &Polynomial, m: usize) -> Option<Vec<u32>> {
    p.graded_degree(|v| (v.family() == Family::A).then(|| v.row() - 1), m)
}

/// Evaluate an (a,b)-polynomial at concrete factors.
pub fn eval_ab(p: &Polynomial, a: &Matrix<Rational>, b: &Matrix<Rational>) -> Result<Rational> {
    p.evaluate(|v| {
        let (i, j) = v.indices();
        match v.family() {
            Family::A if i <= a.rows() && j <= 3 => Some(a[(i - 1, j - 1)].clone()),
            Family::B if i <= 3 && j <= b.cols() => Some(b[(i - 1, j - 1)].clone()),
            _ => None,
        }
    })
}

/// Evaluate an x-polynomial at a concrete matrix.
pub fn eval_x(p: &Polynomial, mat: &Matrix<Rational>) -> Result<Rational> {
    p.evaluate(|v| {
        let (i, j) = v.indices();
        (v.family() == Family::X && i <= mat.rows() && j <= mat.cols()).then(|| mat[(i - 1, j - 1)].clone())
    })
}

/// Swap the roles of rows and columns: `x[i,j] -> x[j,i]`.
pub fn transpose_poly(p: &Polynomial) -> Polynomial {
    p.map_vars(|v| match v.family() {
        Family::X => Var::x(v.col(), v.row()),
        _ => v,
    })
}

/// Relabel rows and columns of an x-polynomial by 1-based permutations
/// (`row_perm[i-1]` is the new index of row `i`).
pub fn permute_poly(p: &Polynomial, row_perm: &[usize], col_perm: &[usize]) -> Polynomial {
    p.map_vars(|v| match v.family() {
        Family::X => Var::x(row_perm[v.row() - 1], col_perm[v.col() - 1]),
        _ => v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn f_expands_to_nineteen_terms_with_expected_multidegree() {
        let f = base_sextic_f();
        assert_eq!(f.len(), 19);
        let md = f.multidegree(4, 3).unwrap().unwrap();
        assert_eq!(md.rows, vec![2, 2, 1, 1]);
        assert_eq!(md.cols, vec![2, 2, 2]);
    }

    #[test]
    fn displayed_d_is_minus_standard_determinant() {
        let d = det_d();
        assert_eq!(d.len(), 6);
        assert!(d.terms().iter().all(|(_, c)| *c == int(1) || *c == int(-1)));
        assert_eq!(det3_b(ColumnTriple([1, 2, 3])), -&d);
    }

    #[test]
    fn pullback_of_a_single_entry() {
        let p = mu_pullback(&x(1, 1), 1, 1).unwrap();
        assert_eq!(p.to_string(), "1 * a[1,1] * b[1,1] + 1 * a[1,2] * b[2,1] + 1 * a[1,3] * b[3,1]");
        assert!(mu_pullback(&x(2, 1), 1, 1).is_err());
        let minor = minor4x4([1, 2, 3, 4], [1, 2, 3, 4]).unwrap();
        assert!(mu_pullback(&minor, 4, 4).unwrap().is_zero());
    }

    #[test]
    fn minor_at_identity() {
        let minor = minor4x4([1, 2, 3, 4], [1, 2, 3, 4]).unwrap();
        assert_eq!(minor.len(), 24);
        assert_eq!(eval_x(&minor, &Matrix::identity(4)).unwrap(), int(1));
        assert!(minor4x4([1, 1, 2, 3], [1, 2, 3, 4]).is_err());
        assert!(det3_a([1, 2, 2]).is_err());
    }

    #[test]
    fn f63_bidegree_and_vanishing() {
        let f63 = compute_f63();
        assert_eq!(f63.bidegree(), Some((6, 3)));
        assert_eq!(a_row_degrees(f63, 4), Some(vec![2, 2, 1, 1]));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pat = ZeroPattern::canonical();
        for _ in 0..10 {
            let (a, b) = pat.sample(4, 3, &mut rng);
            assert!(eval_ab(f63, &a, &b).unwrap().is_zero());
            assert!(eval_x(base_sextic_f(), &a.mul(&b).unwrap()).unwrap().is_zero());
        }
        let (a, b) = sample_generic(4, 3, &mut rng);
        assert!(!eval_ab(f63, &a, &b).unwrap().is_zero());
        assert!(!eval_x(base_sextic_f(), &a.mul(&b).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn diagonal_b_pattern_is_a_different_component() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (a, b) = ZeroPattern::diagonal_b().sample(4, 3, &mut rng);
        assert!(!eval_x(base_sextic_f(), &a.mul(&b).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn transposed_pattern_round_trip() {
        let p = ZeroPattern::canonical();
        assert_eq!(p.transposed().transposed(), p);
        assert_eq!(p.free_parameters(4, 6).len(), 3 * 4 + 3 * 6 - 7);
        let f = base_sextic_f();
        assert_eq!(transpose_poly(&transpose_poly(f)), *f);
        let ident: Vec<usize> = (1..=4).collect();
        assert_eq!(permute_poly(f, &ident, &[1, 2, 3]), *f);
    }

    #[test]
    fn triples() {
        assert_eq!(ColumnTriple::all(6).len(), 20);
        assert_eq!(ColumnTriple::parse("5, 1,3").unwrap(), ColumnTriple([1, 3, 5]));
        assert!(ColumnTriple::parse("1,1,2").is_err());
        assert!(ColumnTriple::parse("1,2").is_err());
    }
}
