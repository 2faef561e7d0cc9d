//! Sextic generators: one per column triple, found by solving the linear
//! system `mu^*(s) = f63 * det3_b(t)` over monomials that are standard for
//! the 4x4 minors, and the orbit construction that relabels columns.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::{compute_f63, det3_b, minor4x4, mu_pullback, ColumnTriple};
use crate::arith::{sparse_row_from_pairs, Rational, Solution, SparseEchelon};
use crate::error::{Error, Result};
use crate::groebner::{cached_basis, lead_reducible, GroebnerBasis};
use crate::poly::{Monomial, MonomialOrder, Polynomial, Var};

/// Row degrees of every sextic (rows 1..4).
pub const SEXTIC_ROW_DEGREES: [u32; 4] = [2, 2, 1, 1];

/// Column degrees `e1 + e2 + e3 + e_i + e_j + e_k` as a map column -> degree.
pub fn sextic_column_degrees(t: ColumnTriple) -> BTreeMap<usize, u32> {
    let mut d = BTreeMap::new();
    for c in [1, 2, 3].into_iter().chain(t.0) {
        *d.entry(c).or_insert(0) += 1;
    }
    d
}

/// All x-monomials on rows `1..=row_deg.len()` with the given row and
/// column degrees.
pub fn candidate_monomials(row_deg: &[u32], col_deg: &BTreeMap<usize, u32>) -> Vec<Monomial> {
    fn rec(
        row: usize,
        row_deg: &[u32],
        cols: &[usize],
        remaining: &mut Vec<u32>,
        acc: &mut Vec<(Var, u32)>,
        out: &mut Vec<Monomial>,
    ) {
        if row == row_deg.len() {
            if remaining.iter().all(|&r| r == 0) {
                out.push(Monomial::from_pairs(acc.iter().copied()));
            }
            return;
        }
        // Distribute row_deg[row] among columns, in column order.
        fn fill(
            row: usize,
            c: usize,
            left: u32,
            row_deg: &[u32],
            cols: &[usize],
            remaining: &mut Vec<u32>,
            acc: &mut Vec<(Var, u32)>,
            out: &mut Vec<Monomial>,
        ) {
            if left == 0 {
                rec(row + 1, row_deg, cols, remaining, acc, out);
                return;
            }
            if c == cols.len() {
                return;
            }
            for e in (0..=left.min(remaining[c])).rev() {
                remaining[c] -= e;
                if e > 0 {
                    acc.push((Var::x(row + 1, cols[c]), e));
                }
                fill(row, c + 1, left - e, row_deg, cols, remaining, acc, out);
                if e > 0 {
                    acc.pop();
                }
                remaining[c] += e;
            }
        }
        fill(row, 0, row_deg[row], row_deg, cols, remaining, acc, out);
    }
    let cols: Vec<usize> = col_deg.keys().copied().collect();
    let mut remaining: Vec<u32> = col_deg.values().copied().collect();
    let mut out = Vec::new();
    rec(0, row_deg, &cols, &mut remaining, &mut Vec::new(), &mut out);
    out
}

/// The 4x4 minors on rows 1..4 and 4-subsets of `cols`.
pub fn row_block_minors(cols: &[usize]) -> Vec<Polynomial> {
    let mut out = Vec::new();
    let n = cols.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    out.push(minor4x4([1, 2, 3, 4], [cols[a], cols[b], cols[c], cols[d]]).expect("valid minor"));
                }
            }
        }
    }
    out
}

/// Gröbner basis of the ideal of 4x4 minors on rows 1..4 and the columns
/// `cols`, memoized.
pub fn minor_basis(cols: &[usize]) -> Arc<GroebnerBasis> {
    static CACHE: OnceLock<Mutex<HashMap<Vec<usize>, Arc<GroebnerBasis>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(gb) = cache.lock().expect("lock").get(cols) {
        return gb.clone();
    }
    let gb = cached_basis(&row_block_minors(cols), &MonomialOrder::Grevlex);
    cache.lock().expect("lock").insert(cols.to_vec(), gb.clone());
    gb
}

/// Columns `{1,2,3} ∪ t`, sorted.
pub fn support_columns(t: ColumnTriple) -> Vec<usize> {
    let mut c: Vec<usize> = [1, 2, 3].into_iter().chain(t.0).collect();
    c.sort_unstable();
    c.dedup();
    c
}

/// Details of one sextic solve.
#[derive(Clone, Debug, Serialize)]
pub struct SexticSolve {
    pub triple: ColumnTriple,
    /// Monomials with the sextic's multidegree.
    pub candidates: usize,
    /// Those not divisible by a leading term of a minor.
    pub standard: usize,
    pub equations: usize,
    #[serde(skip)]
    pub sextic: Polynomial,
}

/// Solve for the canonical sextic of `t` and verify its pullback exactly.
pub fn solve_sextic(t: ColumnTriple, n: usize) -> Result<SexticSolve> {
    if t.largest() > n {
        return Err(Error::OutOfRange(format!("triple {t} exceeds n = {n}")));
    }
    let cols = support_columns(t);
    let gb = minor_basis(&cols);
    let candidates = candidate_monomials(&SEXTIC_ROW_DEGREES, &sextic_column_degrees(t));
    let standard: Vec<Monomial> = candidates.iter().filter(|m| !lead_reducible(m, &gb)).cloned().collect();
    let rhs = compute_f63() * &det3_b(t);

    let images: Vec<Polynomial> = standard
        .par_iter()
        .map(|m| mu_pullback(&Polynomial::term(m.clone(), Rational::from_integer(1.into())), 4, n))
        .collect::<Result<_>>()?;
    let unknowns = standard.len();
    let mut rows: HashMap<Monomial, Vec<(usize, Rational)>> = HashMap::new();
    for (k, img) in images.iter().enumerate() {
        for (u, c) in img.terms() {
            rows.entry(u.clone()).or_default().push((k, c.clone()));
        }
    }
    for (u, c) in rhs.terms() {
        rows.entry(u.clone()).or_default().push((unknowns, c.clone()));
    }
    let mut keys: Vec<Monomial> = rows.keys().cloned().collect();
    keys.sort_by(|a, b| MonomialOrder::Grevlex.cmp(b, a));
    let mut ech = SparseEchelon::new();
    for u in &keys {
        ech.insert(sparse_row_from_pairs(rows[u].iter().cloned()));
    }
    let coeffs = match ech.back_substitute(unknowns) {
        Solution::Unique(v) => v,
        Solution::Particular(_) => {
            return Err(Error::Internal(format!("pullback is not injective on standard monomials for {t}")))
        }
        Solution::Inconsistent => return Err(Error::Internal(format!("no sextic preimage found for {t}"))),
    };
    let sextic = Polynomial::from_terms(standard.into_iter().zip(coeffs).filter(|(_, c)| !c.is_zero()));
    if sextic.is_zero() {
        return Err(Error::Internal(format!("zero sextic for {t}")));
    }
    if mu_pullback(&sextic, 4, n)? != rhs {
        return Err(Error::Internal(format!("pullback check failed for {t}")));
    }
    if gb.normal_form(&sextic) != sextic {
        return Err(Error::Internal(format!("sextic for {t} is not in normal form")));
    }
    Ok(SexticSolve { triple: t, candidates: candidates.len(), standard: unknowns, equations: keys.len(), sextic })
}

/// Canonical sextic of a column triple.
pub fn sextic_for_triple(t: ColumnTriple, n: usize) -> Result<Polynomial> {
    solve_sextic(t, n).map(|s| s.sextic)
}

/// Normal form modulo the minors on rows 1..4 and columns `{1,2,3} ∪ t`.
pub fn canonicalize(p: &Polynomial, t: ColumnTriple) -> Polynomial {
    minor_basis(&support_columns(t)).normal_form(p)
}

/// Strictly increasing maps `{1..6} -> {1..n}` fixing 1, 2, 3, given as
/// the images of `1..=6`.
pub fn column_substitutions(n: usize) -> Vec<[usize; 6]> {
    let mut out = Vec::new();
    for a in 4..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                out.push([1, 2, 3, a, b, c]);
            }
        }
    }
    out
}

/// `x[i,j] -> x[i, s(j)]`.
pub fn apply_substitution(p: &Polynomial, s: &[usize; 6]) -> Polynomial {
    p.map_vars(|v| Var::x(v.row(), s[v.col() - 1]))
}

/// The twenty sextics of the 4x6 case, solved directly.
pub fn base_sextics() -> &'static BTreeMap<ColumnTriple, Polynomial> {
    static S: OnceLock<BTreeMap<ColumnTriple, Polynomial>> = OnceLock::new();
    S.get_or_init(|| {
        ColumnTriple::all(6)
            .into_par_iter()
            .map(|t| (t, sextic_for_triple(t, 6).expect("sextic solve")))
            .collect()
    })
}

/// All `C(n,3)` sextics by relabelling the twenty base sextics.
pub fn sextics_via_orbit(n: usize) -> Result<BTreeMap<ColumnTriple, Polynomial>> {
    if n < 6 {
        return Err(Error::OutOfRange(format!("orbit construction needs n >= 6, got {n}")));
    }
    let mut out: BTreeMap<ColumnTriple, Polynomial> = BTreeMap::new();
    for s in column_substitutions(n) {
        for (t, p) in base_sextics() {
            let image = ColumnTriple::new(s[t.0[0] - 1], s[t.0[1] - 1], s[t.0[2] - 1])?;
            if out.contains_key(&image) {
                continue;
            }
            let q = canonicalize(&apply_substitution(p, &s), image);
            out.insert(image, q);
        }
    }
    Ok(out)
}

/// A 4x4 minor with its index sets.
#[derive(Clone, Debug, PartialEq)]
pub struct Quartic {
    pub rows: [usize; 4],
    pub cols: [usize; 4],
    pub poly: Polynomial,
}

/// Generators of the ideal of `X_{m,n}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorSet {
    pub m: usize,
    pub n: usize,
    pub quartics: Vec<Quartic>,
    pub sextics: BTreeMap<ColumnTriple, Polynomial>,
}

fn four_subsets(n: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            for c in b + 1..=n {
                for d in c + 1..=n {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

pub fn all_quartics(m: usize, n: usize) -> Vec<Quartic> {
    let rows = four_subsets(m);
    let cols = four_subsets(n);
    rows.iter()
        .flat_map(|r| cols.iter().map(move |c| (*r, *c)))
        .map(|(rows, cols)| Quartic { rows, cols, poly: minor4x4(rows, cols).expect("valid minor") })
        .collect()
}

/// Quartics and sextics for an `m x n` matrix, `m >= 4`, `n >= 3`.
pub fn generators(m: usize, n: usize) -> Result<GeneratorSet> {
    if m < 4 || n < 3 {
        return Err(Error::OutOfRange(format!("generators need m >= 4 and n >= 3, got {m}x{n}")));
    }
    let sextics = if n >= 6 {
        sextics_via_orbit(n)?
    } else {
        ColumnTriple::all(n)
            .into_par_iter()
            .map(|t| sextic_for_triple(t, n).map(|p| (t, p)))
            .collect::<Result<_>>()?
    };
    Ok(GeneratorSet { m, n, quartics: all_quartics(m, n), sextics })
}

impl GeneratorSet {
    /// Quartics first (rows then columns lexicographically), then sextics
    /// by triple.
    pub fn all(&self) -> Vec<Polynomial> {
        self.quartics.iter().map(|q| q.poly.clone()).chain(self.sextics.values().cloned()).collect()
    }

    pub fn len(&self) -> usize {
        self.quartics.len() + self.sextics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::base_sextic_f;

    #[test]
    fn candidate_counts() {
        let t123 = ColumnTriple([1, 2, 3]);
        assert_eq!(candidate_monomials(&SEXTIC_ROW_DEGREES, &sextic_column_degrees(t123)).len(), 33);
        let t456 = ColumnTriple([4, 5, 6]);
        assert_eq!(candidate_monomials(&SEXTIC_ROW_DEGREES, &sextic_column_degrees(t456)).len(), 180);
        let t124 = ColumnTriple([1, 2, 4]);
        assert_eq!(candidate_monomials(&SEXTIC_ROW_DEGREES, &sextic_column_degrees(t124)).len(), 58);
    }

    #[test]
    fn candidates_have_the_right_multidegree() {
        let t = ColumnTriple([2, 4, 5]);
        for m in candidate_monomials(&SEXTIC_ROW_DEGREES, &sextic_column_degrees(t)) {
            let p = Polynomial::term(m, Rational::from_integer(1.into()));
            let md = p.multidegree(4, 5).unwrap().unwrap();
            assert_eq!(md.rows, vec![2, 2, 1, 1]);
            assert_eq!(md.cols, vec![1, 2, 1, 1, 1]);
        }
    }

    #[test]
    fn first_triple_recovers_f_up_to_sign() {
        let s = sextic_for_triple(ColumnTriple([1, 2, 3]), 3).unwrap();
        assert_eq!(s, -base_sextic_f());
    }

    #[test]
    fn disjoint_triple_satisfies_the_pullback_equation() {
        let t = ColumnTriple([4, 5, 6]);
        let sol = solve_sextic(t, 6).unwrap();
        assert_eq!(sol.candidates, 180);
        assert!(sol.standard < 180);
        let lhs = mu_pullback(&sol.sextic, 4, 6).unwrap();
        assert_eq!(&lhs - &(compute_f63() * &det3_b(t)), Polynomial::zero());
        let md = sol.sextic.multidegree(4, 6).unwrap().unwrap();
        assert_eq!(md.cols, vec![1, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn substitutions_fix_the_first_three_columns() {
        let subs = column_substitutions(7);
        assert_eq!(subs.len(), 4);
        assert!(subs.iter().all(|s| s[..3] == [1, 2, 3] && s.windows(2).all(|w| w[0] < w[1])));
        assert!(sextics_via_orbit(5).is_err());
    }
}
