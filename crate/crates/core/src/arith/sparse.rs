use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{Rational, Solution};

/// Sparse vector: `(column, value)` pairs, strictly increasing columns,
/// no stored zeros.
pub type SparseRow = Vec<(usize, Rational)>;

/// Incrementally maintained row echelon form over the rationals.
///
/// Rows are inserted one at a time; every stored row is monic in its
/// leading (smallest) column and no two stored rows share a leading column.
/// This is the workhorse for span tests and for tall, sparse systems where
/// only a few hundred unknowns are involved.
#[derive(Clone, Debug, Default)]
pub struct SparseEchelon {
    pivots: BTreeMap<usize, SparseRow>,
}

/// `a - c * b` for sparse rows.
fn axpy(a: &SparseRow, c: &Rational, b: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some((ca, va)), Some((cb, vb))) if ca == cb => {
                let v = va - c * vb;
                if !v.is_zero() {
                    out.push((*ca, v));
                }
                i += 1;
                j += 1;
            }
            (Some((ca, va)), Some((cb, _))) if ca < cb => {
                out.push((*ca, va.clone()));
                i += 1;
            }
            (Some((ca, va)), None) => {
                out.push((*ca, va.clone()));
                i += 1;
            }
            (_, Some((cb, vb))) => {
                out.push((*cb, -(c * vb)));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Build a sparse row from unordered `(column, value)` pairs, summing
/// duplicates and dropping zeros.
pub fn sparse_row_from_pairs(pairs: impl IntoIterator<Item = (usize, Rational)>) -> SparseRow {
    let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
    for (c, v) in pairs {
        *acc.entry(c).or_insert_with(Rational::zero) += v;
    }
    acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

impl SparseEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Head-reduce `row` against the stored pivots. The result is zero iff
    /// `row` lies in the span of the inserted rows.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        while let Some((lead, coeff)) = row.first().cloned() {
            let Some(p) = self.pivots.get(&lead) else {
                break;
            };
            row = axpy(&row, &coeff, p);
        }
        row
    }

    pub fn contains(&self, row: &SparseRow) -> bool {
        self.reduce(row.clone()).is_empty()
    }

    /// Insert a row; returns `true` when it increased the rank.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let row = self.reduce(row);
        let Some((lead, coeff)) = row.first().cloned() else {
            return false;
        };
        let inv = Rational::one() / coeff;
        let row: SparseRow = row.into_iter().map(|(c, v)| (c, v * &inv)).collect();
        self.pivots.insert(lead, row);
        true
    }

    /// Solve a system whose equations were inserted with the right-hand side
    /// stored in column `unknowns` (after all unknown columns). Free
    /// variables are set to zero.
    pub fn back_substitute(&self, unknowns: usize) -> Solution<Rational> {
        if self.pivots.contains_key(&unknowns) {
            return Solution::Inconsistent;
        }
        let mut x = vec![Rational::zero(); unknowns];
        for (&c, row) in self.pivots.iter().rev() {
            let mut val = Rational::zero();
            for (j, v) in row.iter().skip(1) {
                if *j == unknowns {
                    val += v;
                } else {
                    val -= v * &x[*j];
                }
            }
            x[c] = val;
        }
        if self.pivots.len() == unknowns {
            Solution::Unique(x)
        } else {
            Solution::Particular(x)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{frac, int, Matrix};

    fn row(pairs: &[(usize, i64)]) -> SparseRow {
        sparse_row_from_pairs(pairs.iter().map(|&(c, v)| (c, int(v))))
    }

    #[test]
    fn span_membership() {
        let mut e = SparseEchelon::new();
        assert!(e.insert(row(&[(0, 1), (1, 1)])));
        assert!(e.insert(row(&[(1, 2), (2, 1)])));
        assert!(!e.insert(row(&[(0, 2), (1, 4), (2, 1)])));
        assert!(e.contains(&row(&[(0, 1), (1, -1), (2, -1)])));
        assert!(!e.contains(&row(&[(2, 1)])));
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn solves_tall_system_like_dense() {
        // x + y = 3, y + z = 5, x + z = 4, x + y + z = 6
        let eqs = [
            [(0, 1), (1, 1), (3, 3)],
            [(1, 1), (2, 1), (3, 5)],
            [(0, 1), (2, 1), (3, 4)],
        ];
        let mut e = SparseEchelon::new();
        for eq in eqs {
            e.insert(row(&eq));
        }
        e.insert(row(&[(0, 1), (1, 1), (2, 1), (3, 6)]));
        let sol = e.back_substitute(3);
        assert_eq!(sol, Solution::Unique(vec![int(1), int(2), int(3)]));

        let dense = Matrix::<Rational>::from_i64_rows(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
        assert_eq!(dense.solve(&[int(3), int(5), int(4)]).unwrap(), sol);
    }

    #[test]
    fn detects_inconsistency_and_free_variables() {
        let mut e = SparseEchelon::new();
        e.insert(row(&[(0, 1), (1, 1), (2, 2)]));
        assert_eq!(e.back_substitute(2), Solution::Particular(vec![int(2), int(0)]));
        e.insert(row(&[(0, 1), (1, 1), (2, 3)]));
        assert_eq!(e.back_substitute(2), Solution::Inconsistent);
        let mut e = SparseEchelon::new();
        e.insert(vec![(0, frac(1, 2)), (1, int(1))]);
        assert_eq!(e.back_substitute(1), Solution::Unique(vec![int(2)]));
    }
}
