use serde::Serialize;

use super::{ConvexPolygon, HalfPlane, Point};
use crate::arith::{Matrix, Scalar};
use crate::error::{Error, Result};

/// Affine coordinates on `Span(M) ∩ {sum x_i = 1}`.
#[derive(Clone, Debug)]
pub struct Chart<T> {
    m: usize,
    origin: Vec<T>,
    axes: [Vec<T>; 2],
    pivots: [usize; 2],
    facets: Vec<HalfPlane<T>>,
}

impl<T: Scalar> Chart<T> {
    pub fn dim(&self) -> usize {
        self.m
    }

    /// Restrictions of `x_i >= 0` to the chart, one per row.
    pub fn facets(&self) -> &[HalfPlane<T>] {
        &self.facets
    }

    pub fn lift(&self, p: &Point<T>) -> Vec<T> {
        (0..self.m)
            .map(|i| self.origin[i].clone() + p.x.clone() * self.axes[0][i].clone() + p.y.clone() * self.axes[1][i].clone())
            .collect()
    }

    /// Chart coordinates of a point of the plane; errors if `x` is off it.
    pub fn project(&self, x: &[T]) -> Result<Point<T>> {
        if x.len() != self.m {
            return Err(Error::DimensionMismatch(format!("expected {} coordinates, got {}", self.m, x.len())));
        }
        let [r, s] = self.pivots;
        let (a, b, c, d) = (&self.axes[0][r], &self.axes[1][r], &self.axes[0][s], &self.axes[1][s]);
        let det = a.clone() * d.clone() - b.clone() * c.clone();
        let (u, v) = (x[r].clone() - self.origin[r].clone(), x[s].clone() - self.origin[s].clone());
        let p = Point::new(
            (u.clone() * d.clone() - b.clone() * v.clone()) / det.clone(),
            (a.clone() * v - c.clone() * u) / det,
        );
        if self.lift(&p) != x {
            return Err(Error::DimensionMismatch("point is not on the chart plane".into()));
        }
        Ok(p)
    }
}

/// The chart together with the column points and the polygons `V ⊆ W`.
#[derive(Clone, Debug, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct NestedPolygons<T: Scalar> {
    #[serde(skip)]
    pub chart: Chart<T>,
    /// Chart image of each column.
    pub points: Vec<Point<T>>,
    pub v: ConvexPolygon<T>,
    pub w: ConvexPolygon<T>,
}

fn check_nonnegative<T: Scalar>(m: &Matrix<T>) -> Result<()> {
    if m.entries().iter().any(|e| e.signum_i8() < 0) {
        return Err(Error::DegenerateInput("matrix has a negative entry".into()));
    }
    Ok(())
}

/// Columns scaled to sum one.
pub fn normalized_columns<T: Scalar>(m: &Matrix<T>) -> Result<Vec<Vec<T>>> {
    (0..m.cols())
        .map(|j| {
            let col = m.column(j);
            let s = col.iter().cloned().fold(T::zero(), |a, b| a + b);
            if s.is_zero() {
                return Err(Error::DegenerateInput(format!("column {} is zero", j + 1)));
            }
            Ok(col.into_iter().map(|x| x / s.clone()).collect())
        })
        .collect()
}

fn independent_triple<T: Scalar>(cols: &[Vec<T>]) -> Option<[usize; 3]> {
    let j1 = (1..cols.len()).find(|&j| cols[j] != cols[0])?;
    let j2 = (j1 + 1..cols.len()).find(|&j| {
        let sub = Matrix::from_fn(cols[0].len(), 3, |i, k| cols[[0, j1, j][k]][i].clone());
        sub.rank() == 3
    })?;
    Some([0, j1, j2])
}

/// Build the chart of a nonnegative rank-3 matrix with no zero column.
pub fn chart_from_matrix<T: Scalar>(m: &Matrix<T>) -> Result<NestedPolygons<T>> {
    check_nonnegative(m)?;
    let cols = normalized_columns(m)?;
    let rank = m.rank();
    if rank != 3 {
        return Err(Error::RankError { expected: 3, found: rank });
    }
    let [j0, j1, j2] = independent_triple(&cols).ok_or_else(|| Error::Internal("no independent columns".into()))?;
    let rows = m.rows();
    let origin = cols[j0].clone();
    let axes = [
        (0..rows).map(|i| cols[j1][i].clone() - origin[i].clone()).collect::<Vec<T>>(),
        (0..rows).map(|i| cols[j2][i].clone() - origin[i].clone()).collect::<Vec<T>>(),
    ];
    let pivots = (0..rows)
        .flat_map(|r| (r + 1..rows).map(move |s| [r, s]))
        .find(|&[r, s]| {
            !(axes[0][r].clone() * axes[1][s].clone() - axes[1][r].clone() * axes[0][s].clone()).is_zero()
        })
        .ok_or_else(|| Error::Internal("chart axes are dependent".into()))?;
    let facets = (0..rows)
        .map(|i| HalfPlane { a: axes[0][i].clone(), b: axes[1][i].clone(), c: origin[i].clone() })
        .collect();
    let chart = Chart { m: rows, origin, axes, pivots, facets };
    let points = cols.iter().map(|c| chart.project(c)).collect::<Result<Vec<_>>>()?;
    let v = ConvexPolygon::hull(points.iter().cloned());
    let w = ConvexPolygon::from_halfplanes(chart.facets())?;
    if v.is_degenerate() || w.is_degenerate() || !w.contains_all(v.vertices()) {
        return Err(Error::Internal("chart polygons are not nested".into()));
    }
    Ok(NestedPolygons { chart, points, v, w })
}

/// Matrix of the slack of `points` against the edges of `w`, scaled so
/// that every column sums to one. Its chart is affinely equivalent to
/// `(w, hull(points))`.
pub fn slack_matrix<T: Scalar>(w: &ConvexPolygon<T>, points: &[Point<T>]) -> Result<Matrix<T>> {
    if w.is_degenerate() {
        return Err(Error::DegenerateInput("outer polygon has no interior".into()));
    }
    let area2 = w.area2();
    let planes = w.edge_halfplanes();
    let entries: Vec<T> = planes
        .iter()
        .flat_map(|h| points.iter().map(move |p| h.eval(p)))
        .map(|x| x / area2.clone())
        .collect();
    if entries.iter().any(|e| e.signum_i8() < 0) {
        return Err(Error::DegenerateInput("a point lies outside the outer polygon".into()));
    }
    Matrix::from_vec(planes.len(), points.len(), entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{frac, int, random_positive_rational, Rational};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn slack_square_touches_the_boundary() {
        let m: Matrix<Rational> = Matrix::from_i64_rows(&[&[1, 1, 0, 0], &[0, 1, 1, 0], &[0, 0, 1, 1], &[1, 0, 0, 1]]);
        let np = chart_from_matrix(&m).unwrap();
        assert_eq!(np.w.len(), 4);
        assert_eq!(np.v.len(), 4);
        assert!(np.v.vertices().iter().all(|p| np.w.on_boundary(p)));
        assert!(np.v.same_vertices(&np.w));
    }

    #[test]
    fn positive_matrix_has_v_strictly_inside_w() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = Matrix::from_fn(5, 3, |_, _| random_positive_rational(&mut rng));
        let b = Matrix::from_fn(3, 6, |_, _| random_positive_rational(&mut rng));
        let np = chart_from_matrix(&a.mul(&b).unwrap()).unwrap();
        for p in np.v.vertices() {
            assert!(np.chart.facets().iter().all(|h| h.eval(p).signum_i8() > 0));
        }
        for (j, p) in np.points.iter().enumerate() {
            let col = a.mul(&b).unwrap().column(j);
            let s = col.iter().cloned().fold(int(0), |x, y| x + y);
            let lifted: Vec<Rational> = col.iter().map(|x| x / &s).collect();
            assert_eq!(np.chart.lift(p), lifted);
        }
    }

    #[test]
    fn column_scaling_keeps_v() {
        let m: Matrix<Rational> = Matrix::from_i64_rows(&[&[3, 1, 2, 1], &[1, 4, 1, 2], &[2, 1, 5, 3]]);
        let scaled = Matrix::from_fn(3, 4, |i, j| &m[(i, j)] * frac(j as i64 + 2, 3));
        let (a, b) = (chart_from_matrix(&m).unwrap(), chart_from_matrix(&scaled).unwrap());
        assert!(a.v.same_vertices(&b.v));
        assert!(a.w.same_vertices(&b.w));
    }

    #[test]
    fn errors() {
        let rank2: Matrix<Rational> = Matrix::from_i64_rows(&[&[1, 2, 3], &[2, 4, 6], &[1, 1, 1]]);
        assert_eq!(chart_from_matrix(&rank2).unwrap_err(), Error::RankError { expected: 3, found: 2 });
        let zero_col: Matrix<Rational> = Matrix::from_i64_rows(&[&[1, 0, 0, 1], &[0, 0, 1, 1], &[0, 0, 2, 3]]);
        assert!(matches!(chart_from_matrix(&zero_col), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn slack_matrix_round_trip() {
        let w = ConvexPolygon::hull([(0, 0), (4, 0), (4, 4), (0, 4)].map(|(x, y)| Point::<Rational>::from_i64(x, y)));
        let pts: Vec<_> = [(1, 1), (3, 1), (2, 3)].iter().map(|&(x, y)| Point::from_i64(x, y)).collect();
        let m = slack_matrix(&w, &pts).unwrap();
        for j in 0..3 {
            assert_eq!(m.column(j).into_iter().fold(int(0), |a, b| a + b), int(1));
        }
        let np = chart_from_matrix(&m).unwrap();
        assert_eq!((np.w.len(), np.v.len()), (4, 3));
    }
}
