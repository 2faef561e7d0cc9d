use serde::{Serialize, Serializer};

use super::{candidate_triangles, chart_from_matrix, normalized_columns, on_segment, orient, Anchor, Point, TriangleCandidate};
use crate::arith::{Matrix, Scalar};
use crate::error::{Error, Result};

/// How a nonnegative-rank decision was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum NnrankMethod {
    /// Rank at most two: nonnegative rank equals rank.
    RankAtMostTwo,
    /// Nonnegative rank is at least the rank.
    RankAboveThree,
    /// `V` is itself a triangle.
    InnerTriangle,
    /// Search over the `Δ^w`, `Δ^e` family.
    Candidates,
    /// `V = W` and it is not a triangle, so nothing fits in between.
    InnerEqualsOuter,
}

pub(crate) fn matrix_strings<T: Scalar>(m: &Matrix<T>) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|x| x.to_exact_string()).collect()).collect()
}

fn ser_factors<T: Scalar, S: Serializer>(f: &Option<(Matrix<T>, Matrix<T>)>, s: S) -> std::result::Result<S::Ok, S::Error> {
    f.as_ref().map(|(a, b)| (matrix_strings(a), matrix_strings(b))).serialize(s)
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct NnrankReport<T: Scalar> {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    /// Nonnegative rank at most three.
    pub decision: bool,
    pub method: NnrankMethod,
    pub witness: Option<TriangleCandidate<T>>,
    pub candidates: Vec<TriangleCandidate<T>>,
    /// `(A, B)` with `A, B >= 0` and `A B = M`, when `decision` holds.
    #[serde(serialize_with = "ser_factors")]
    pub factorization: Option<(Matrix<T>, Matrix<T>)>,
}

fn check_nonnegative<T: Scalar>(m: &Matrix<T>) -> Result<()> {
    if m.entries().iter().any(|e| e.signum_i8() < 0) {
        return Err(Error::DegenerateInput("matrix has a negative entry".into()));
    }
    Ok(())
}

fn col_sum<T: Scalar>(m: &Matrix<T>, j: usize) -> T {
    m.column(j).into_iter().fold(T::zero(), |a, b| a + b)
}

/// Nonnegative factorization through at most two extreme columns.
fn low_rank_factors<T: Scalar>(m: &Matrix<T>) -> (Matrix<T>, Matrix<T>) {
    let (rows, cols) = (m.rows(), m.cols());
    let nonzero: Vec<usize> = (0..cols).filter(|&j| !col_sum(m, j).is_zero()).collect();
    let mut a = Matrix::zeros(rows, 3);
    let mut b = Matrix::zeros(3, cols);
    if nonzero.is_empty() {
        return (a, b);
    }
    let norm = normalized_columns(&m.select(&(0..rows).collect::<Vec<_>>(), &nonzero)).expect("nonzero columns");
    let p0 = &norm[0];
    let Some(k) = norm.iter().position(|p| p != p0) else {
        for i in 0..rows {
            a[(i, 0)] = p0[i].clone();
        }
        for &j in &nonzero {
            b[(0, j)] = col_sum(m, j);
        }
        return (a, b);
    };
    // Rank two: the normalized columns lie on a segment.
    let i = (0..rows).find(|&i| norm[k][i] != p0[i]).expect("distinct points");
    let t: Vec<T> = norm.iter().map(|p| (p[i].clone() - p0[i].clone()) / (norm[k][i].clone() - p0[i].clone())).collect();
    let lo = (0..t.len()).min_by(|&x, &y| t[x].cmp(&t[y])).expect("nonempty");
    let hi = (0..t.len()).max_by(|&x, &y| t[x].cmp(&t[y])).expect("nonempty");
    let span = t[hi].clone() - t[lo].clone();
    for r in 0..rows {
        a[(r, 0)] = norm[lo][r].clone();
        a[(r, 1)] = norm[hi][r].clone();
    }
    for (idx, &j) in nonzero.iter().enumerate() {
        let lam = (t[idx].clone() - t[lo].clone()) / span.clone();
        let s = col_sum(m, j);
        b[(0, j)] = s.clone() * (T::one() - lam.clone());
        b[(1, j)] = s * lam;
    }
    (a, b)
}

/// Barycentric coordinates of `p` in the counterclockwise triangle `t`.
fn barycentric<T: Scalar>(t: &[Point<T>; 3], p: &Point<T>) -> [T; 3] {
    let area = t[1].sub(&t[0]).cross(&t[2].sub(&t[0]));
    let part = |a: &Point<T>, b: &Point<T>| b.sub(a).cross(&p.sub(a)) / area.clone();
    [part(&t[1], &t[2]), part(&t[2], &t[0]), part(&t[0], &t[1])]
}

fn verify_factors<T: Scalar>(m: &Matrix<T>, a: &Matrix<T>, b: &Matrix<T>) -> Result<()> {
    let nonneg = |x: &Matrix<T>| x.entries().iter().all(|e| e.signum_i8() >= 0);
    if !nonneg(a) || !nonneg(b) || a.mul(b)? != *m {
        return Err(Error::Internal("certificate does not reproduce the matrix".into()));
    }
    Ok(())
}

/// Decide whether a nonnegative matrix has nonnegative rank at most three.
///
/// Rank-3 inputs with a zero entry are handled only when the answer is
/// forced (`V` a triangle, some candidate fits, or `V = W`); otherwise
/// [`Error::RequiresPositive`].
pub fn nnrank_le3<T: Scalar>(m: &Matrix<T>) -> Result<NnrankReport<T>> {
    check_nonnegative(m)?;
    let rank = m.rank();
    let mut report = NnrankReport {
        rows: m.rows(),
        cols: m.cols(),
        rank,
        decision: false,
        method: NnrankMethod::RankAboveThree,
        witness: None,
        candidates: Vec::new(),
        factorization: None,
    };
    if rank > 3 {
        return Ok(report);
    }
    if rank <= 2 {
        let (a, b) = low_rank_factors(m);
        verify_factors(m, &a, &b)?;
        report.decision = true;
        report.method = NnrankMethod::RankAtMostTwo;
        report.factorization = Some((a, b));
        return Ok(report);
    }
    let nonzero: Vec<usize> = (0..m.cols()).filter(|&j| !col_sum(m, j).is_zero()).collect();
    let sub = m.select(&(0..m.rows()).collect::<Vec<_>>(), &nonzero);
    let np = chart_from_matrix(&sub)?;
    let witness = if np.v.len() == 3 {
        report.method = NnrankMethod::InnerTriangle;
        let t = np.v.vertices();
        Some(TriangleCandidate::new([t[0].clone(), t[1].clone(), t[2].clone()], Anchor::Inner, &np.v, &np.w))
    } else {
        report.method = NnrankMethod::Candidates;
        report.candidates = candidate_triangles(&np.w, &np.v)?;
        report.candidates.iter().find(|c| c.is_valid()).cloned()
    };
    match witness {
        Some(t) => {
            let a = Matrix::from_fn(m.rows(), 3, {
                let lifted: Vec<Vec<T>> = t.vertices.iter().map(|p| np.chart.lift(p)).collect();
                move |i, k| lifted[k][i].clone()
            });
            let mut cols = vec![[T::zero(), T::zero(), T::zero()]; m.cols()];
            for (idx, &j) in nonzero.iter().enumerate() {
                let s = col_sum(m, j);
                cols[j] = barycentric(&t.vertices, &np.points[idx]).map(|x| x * s.clone());
            }
            let b = Matrix::from_fn(3, m.cols(), |k, j| cols[j][k].clone());
            verify_factors(m, &a, &b)?;
            report.decision = true;
            report.witness = Some(t);
            report.factorization = Some((a, b));
        }
        None => {
            let has_zero = sub.entries().iter().any(|e| e.is_zero());
            if has_zero {
                if !np.v.same_vertices(&np.w) {
                    return Err(Error::RequiresPositive);
                }
                report.method = NnrankMethod::InnerEqualsOuter;
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BoundaryStatus {
    Interior,
    Boundary,
    NotInModel,
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct CandidateIncidence<T: Scalar> {
    pub candidate: TriangleCandidate<T>,
    /// Every edge of the triangle contains a vertex of `V`.
    pub every_edge_meets_v: bool,
    /// Some edge of the triangle contains an edge of `V`.
    pub edge_contains_v_edge: bool,
    /// Some vertex of the triangle is a vertex of `W`.
    pub vertex_at_w_vertex: bool,
    pub boundary_condition: bool,
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct BoundaryReport<T: Scalar> {
    pub status: BoundaryStatus,
    pub note: &'static str,
    pub rank: usize,
    pub has_zero_entry: bool,
    pub valid_candidates: Vec<CandidateIncidence<T>>,
    pub nnrank: Option<NnrankReport<T>>,
}

const CANDIDATE_NOTE: &str = "incidence conditions evaluated over the candidate triangles Δ^w and Δ^e only";

/// Incidence conditions of a valid candidate against `V` and `W`.
pub fn incidence<T: Scalar>(
    c: &TriangleCandidate<T>,
    v: &super::ConvexPolygon<T>,
    w: &super::ConvexPolygon<T>,
) -> CandidateIncidence<T> {
    let edges = c.edges();
    let every_edge_meets_v = edges.iter().all(|(a, b)| v.vertices().iter().any(|p| on_segment(a, b, p)));
    let edge_contains_v_edge = edges.iter().any(|(a, b)| {
        (0..v.len()).any(|i| {
            let (p, q) = v.edge(i);
            on_segment(a, b, p) && on_segment(a, b, q)
        })
    });
    let vertex_at_w_vertex = c.vertices.iter().any(|p| w.vertices().contains(p));
    CandidateIncidence {
        candidate: c.clone(),
        every_edge_meets_v,
        edge_contains_v_edge,
        vertex_at_w_vertex,
        boundary_condition: every_edge_meets_v && (edge_contains_v_edge || vertex_at_w_vertex),
    }
}

/// Classify a nonnegative matrix of rank at most three relative to the
/// set of matrices of nonnegative rank at most three.
pub fn boundary_test<T: Scalar>(m: &Matrix<T>) -> Result<BoundaryReport<T>> {
    check_nonnegative(m)?;
    let rank = m.rank();
    if rank > 3 {
        return Err(Error::RankError { expected: 3, found: rank });
    }
    let has_zero_entry = m.entries().iter().any(|e| e.is_zero());
    if has_zero_entry {
        let nn = nnrank_le3(m)?;
        let status = if nn.decision { BoundaryStatus::Boundary } else { BoundaryStatus::NotInModel };
        return Ok(BoundaryReport {
            status,
            note: "matrix has a zero entry",
            rank,
            has_zero_entry,
            valid_candidates: Vec::new(),
            nnrank: Some(nn),
        });
    }
    if rank < 3 {
        return Err(Error::RankError { expected: 3, found: rank });
    }
    let np = chart_from_matrix(m)?;
    let cands = candidate_triangles(&np.w, &np.v)?;
    let valid: Vec<CandidateIncidence<T>> =
        cands.iter().filter(|c| c.is_valid()).map(|c| incidence(c, &np.v, &np.w)).collect();
    let status = if valid.is_empty() {
        BoundaryStatus::NotInModel
    } else if valid.iter().all(|c| c.boundary_condition) {
        BoundaryStatus::Boundary
    } else {
        BoundaryStatus::Interior
    };
    Ok(BoundaryReport { status, note: CANDIDATE_NOTE, rank, has_zero_entry, valid_candidates: valid, nnrank: None })
}

/// Whether the counterclockwise triangle strictly contains `p`.
pub fn strictly_inside<T: Scalar>(t: &[Point<T>; 3], p: &Point<T>) -> bool {
    (0..3).all(|i| orient(&t[i], &t[(i + 1) % 3], p) > 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{frac, random_positive_rational, Rational};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn slack_square() -> Matrix<Rational> {
        Matrix::from_i64_rows(&[&[1, 1, 0, 0], &[0, 1, 1, 0], &[0, 0, 1, 1], &[1, 0, 0, 1]])
    }

    fn positive_product(seed: u64, m: usize, n: usize) -> Matrix<Rational> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Matrix::from_fn(m, 3, |_, _| random_positive_rational(&mut rng));
        let b = Matrix::from_fn(3, n, |_, _| random_positive_rational(&mut rng));
        a.mul(&b).unwrap()
    }

    #[test]
    fn slack_square_has_nonnegative_rank_four() {
        let r = nnrank_le3(&slack_square()).unwrap();
        assert!(!r.decision);
        assert_eq!(r.method, NnrankMethod::InnerEqualsOuter);
        assert_eq!(boundary_test(&slack_square()).unwrap().status, BoundaryStatus::NotInModel);
    }

    #[test]
    fn low_rank_fast_path() {
        let m: Matrix<Rational> = Matrix::from_i64_rows(&[&[1, 2, 3], &[2, 4, 6]]);
        let r = nnrank_le3(&m).unwrap();
        assert!(r.decision);
        assert_eq!(r.method, NnrankMethod::RankAtMostTwo);
        let m2: Matrix<Rational> = Matrix::from_i64_rows(&[&[1, 0, 2, 1], &[0, 1, 1, 3], &[1, 1, 3, 4]]);
        let r = nnrank_le3(&m2).unwrap();
        assert_eq!((r.rank, r.decision), (2, true));
        assert!(nnrank_le3(&Matrix::<Rational>::zeros(2, 2)).unwrap().decision);
    }

    #[test]
    fn negative_entries_are_rejected() {
        let m: Matrix<Rational> = Matrix::from_i64_rows(&[&[1, -1], &[1, 1]]);
        assert!(matches!(nnrank_le3(&m), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn zero_entry_is_boundary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = Matrix::from_fn(4, 3, |i, k| if (i, k) == (0, 0) { frac(0, 1) } else { random_positive_rational(&mut rng) });
        let b = Matrix::from_fn(3, 5, |k, j| if (k, j) == (1, 0) || (k, j) == (2, 0) { frac(0, 1) } else { random_positive_rational(&mut rng) });
        let z = a.mul(&b).unwrap();
        assert!(z[(0, 0)] == frac(0, 1));
        assert_eq!(boundary_test(&z).unwrap().status, BoundaryStatus::Boundary);
    }

    #[test]
    fn random_positive_products_have_witnesses() {
        for seed in 0..20 {
            let m = positive_product(seed, 3 + (seed % 4) as usize, 3 + (seed % 5) as usize);
            let r = nnrank_le3(&m).unwrap();
            assert!(r.decision, "seed {seed}");
            let (a, b) = r.factorization.as_ref().unwrap();
            assert_eq!(a.mul(b).unwrap(), m);
            if let Some(w) = &r.witness {
                assert!(w.is_valid());
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn scaling_and_transposition_preserve_the_decision(seed in 0u64..1000, m in 3usize..6, n in 3usize..6, s in 1i64..9) {
            let x = positive_product(seed, m, n);
            let d = nnrank_le3(&x).unwrap().decision;
            let cs = Matrix::from_fn(m, n, |i, j| &x[(i, j)] * frac((j as i64) + s, 7));
            let rs = Matrix::from_fn(m, n, |i, j| &x[(i, j)] * frac(s, (i as i64) + 2));
            prop_assert_eq!(nnrank_le3(&cs).unwrap().decision, d);
            prop_assert_eq!(nnrank_le3(&rs).unwrap().decision, d);
            prop_assert_eq!(nnrank_le3(&x.transpose()).unwrap().decision, d);
        }
    }
}
