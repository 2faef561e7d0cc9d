//! Two explicit families: a square with a slanted octagon inside, and a
//! regular `3n`-gon with the star polygon cut out by its long diagonals.

use std::f64::consts::PI;

use num_traits::{One, Zero};
use serde::Serialize;

use super::{
    candidate_triangles, delta_e, delta_w, nnrank_le3, boundary_test, slack_matrix, BoundaryStatus,
    ConvexPolygon, HalfPlane, Point, TriangleCandidate,
};
use crate::arith::{frac, rational_approx, Matrix, QuadExt, Rational, Scalar};
use crate::error::{Error, Result};

pub type Sqrt2 = QuadExt<2>;

#[derive(Clone, Debug, Serialize)]
pub struct ReportItem {
    pub item: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl ReportItem {
    fn new(item: &'static str, pass: bool, detail: impl Into<String>) -> Self {
        ReportItem { item, pass, detail: detail.into() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExampleReport {
    pub example: &'static str,
    pub parameters: Vec<(String, String)>,
    pub items: Vec<ReportItem>,
}

impl ExampleReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn item(&self, name: &str) -> Option<&ReportItem> {
        self.items.iter().find(|i| i.item == name)
    }
}

fn center_side<T: Scalar>(p: &Point<T>, d: &Point<T>, center: &Point<T>) -> HalfPlane<T> {
    let h = HalfPlane::left_of(p, &p.add(d));
    if h.eval(center).signum_i8() >= 0 {
        h
    } else {
        HalfPlane { a: -h.a, b: -h.b, c: -h.c }
    }
}

/// Unit square `W` and the octagon `V_θ` cut out by the lines through each
/// corner at angles `θ` and `π/2 - θ` to the adjacent edge, with
/// `tan θ = t`.
pub fn square_polygons<T: Scalar>(t: &T) -> Result<(ConvexPolygon<T>, ConvexPolygon<T>)> {
    let w = ConvexPolygon::from_ccw([(0, 0), (1, 0), (1, 1), (0, 1)].map(|(x, y)| Point::<T>::from_i64(x, y)).to_vec())?;
    let half = T::one() / T::from_i64(2);
    let center = Point::new(half.clone(), half);
    let mut planes = w.edge_halfplanes();
    for k in 0..4 {
        let (p, q) = w.edge(k);
        let e = q.sub(p);
        // e rotated by θ and by π/2 - θ, up to positive scale.
        for (c, s) in [(T::one(), t.clone()), (t.clone(), T::one())] {
            let d = Point::new(e.x.clone() * c.clone() - e.y.clone() * s.clone(), e.x.clone() * s + e.y.clone() * c);
            planes.push(center_side(p, &d, &center));
        }
    }
    Ok((w, ConvexPolygon::from_halfplanes(&planes)?))
}

/// Largest `eps` accepted by [`square_example`].
pub fn square_eps_bound() -> Rational {
    frac(1, 25)
}

fn is_perpendicular<T: Scalar>(p: &Point<T>) -> bool {
    let half = T::one() / T::from_i64(2);
    p.x == half || p.y == half
}

/// Move the vertices on the symmetry axes `eps` away from the centre.
pub fn push_perpendicular<T: Scalar>(v: &ConvexPolygon<T>, eps: &T) -> Vec<Point<T>> {
    let half = T::one() / T::from_i64(2);
    let away = |c: &T| if *c < half { c.clone() - eps.clone() } else { c.clone() + eps.clone() };
    v.vertices()
        .iter()
        .map(|p| {
            if p.x == half {
                Point::new(p.x.clone(), away(&p.y))
            } else if p.y == half {
                Point::new(away(&p.x), p.y.clone())
            } else {
                p.clone()
            }
        })
        .collect()
}

pub struct SquareExample {
    pub w: ConvexPolygon<Sqrt2>,
    pub v: ConvexPolygon<Sqrt2>,
    pub v_prime: ConvexPolygon<Sqrt2>,
    /// Columns are the vertices of `V'`.
    pub matrix: Matrix<Sqrt2>,
    /// Triangles exhibited by items (iii) and (iv).
    pub triangles: Vec<TriangleCandidate<Sqrt2>>,
    pub report: ExampleReport,
}

fn edge_between<T: Scalar>(poly: &ConvexPolygon<T>, a: &Point<T>, b: &Point<T>) -> Option<usize> {
    (0..poly.len()).find(|&i| {
        let (p, q) = poly.edge(i);
        p == a && q == b
    })
}

/// The square example at `θ = π/8`, exactly over `Q(sqrt 2)`.
pub fn square_example(eps: &Rational) -> Result<SquareExample> {
    if eps.signum_i8() <= 0 || *eps > square_eps_bound() {
        return Err(Error::OutOfRange(format!("eps must lie in (0, {}]", square_eps_bound())));
    }
    let t = Sqrt2::new(-Rational::one(), Rational::one());
    let (w, v) = square_polygons(&t)?;
    let eps_q = Sqrt2::from_rational(eps.clone());
    let moved = push_perpendicular(&v, &eps_q);
    let v_prime = ConvexPolygon::from_ccw(moved.clone())?;
    let mut items = Vec::new();
    let mut triangles = Vec::new();

    let angular = v.vertices().iter().filter(|p| !is_perpendicular(*p)).count();
    let perpendicular = v.len() - angular;
    items.push(ReportItem::new(
        "classification",
        v.len() == 8 && angular == 4 && perpendicular == 4,
        format!("{angular} angular, {perpendicular} perpendicular"),
    ));

    let mv = slack_matrix(&w, v.vertices())?;
    let status = boundary_test(&mv)?.status;
    items.push(ReportItem::new("i", status == BoundaryStatus::Boundary, format!("V: {status:?}")));

    let matrix = slack_matrix(&w, v_prime.vertices())?;
    let cands = candidate_triangles(&w, &v_prime)?;
    let fits = cands.iter().filter(|c| c.is_valid()).count();
    let chart_decision = nnrank_le3(&matrix)?.decision;
    items.push(ReportItem::new(
        "ii",
        fits == 0 && !chart_decision,
        format!("{} candidates, {fits} nested; chart decision nnrank<=3: {chart_decision}", cands.len()),
    ));

    // (iii): without an angular vertex the rest fits in some corner triangle.
    let mut ok3 = true;
    let mut detail3 = Vec::new();
    for (k, p) in moved.iter().enumerate().filter(|(_, p)| !is_perpendicular(*p)) {
        let rest: Vec<&Point<Sqrt2>> = moved.iter().filter(|q| *q != p).collect();
        let hit = (0..w.len())
            .filter_map(|wi| delta_w(&w, &v_prime, wi).ok())
            .find(|c| c.polygon().contains_all(rest.iter().copied()) && c.inside_w);
        match hit {
            Some(c) => {
                detail3.push(format!("vertex {k}: {:?}", c.anchor));
                triangles.push(c);
            }
            None => {
                ok3 = false;
                detail3.push(format!("vertex {k}: none"));
            }
        }
    }
    items.push(ReportItem::new("iii", ok3, detail3.join("; ")));

    // (iv): without a perpendicular vertex the new edge's Δ^e fits, touching ∂W.
    let mut ok4 = true;
    let mut detail4 = Vec::new();
    let n = moved.len();
    for k in (0..n).filter(|&k| is_perpendicular(&moved[k])) {
        let (prev, next) = (&moved[(k + n - 1) % n], &moved[(k + 1) % n]);
        let reduced = ConvexPolygon::hull(moved.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, q)| q.clone()));
        let tri = edge_between(&reduced, prev, next).map(|e| delta_e(&w, &reduced, e)).transpose()?.flatten();
        match tri {
            Some(c) => {
                // The chord ends are on ∂W by construction; tight means the apex is too.
                let tight = c.vertices.iter().all(|p| w.on_boundary(p));
                let pass = c.inside_w && c.contains_v && tight;
                ok4 &= pass;
                detail4.push(format!(
                    "vertex {k}: inside W {}, contains V'' {}, apex on boundary of W {}",
                    c.inside_w, c.contains_v, tight
                ));
                triangles.push(c);
            }
            None => {
                ok4 = false;
                detail4.push(format!("vertex {k}: no edge triangle"));
            }
        }
    }
    items.push(ReportItem::new("iv", ok4, detail4.join("; ")));

    Ok(SquareExample {
        w,
        v,
        v_prime,
        matrix,
        triangles,
        report: ExampleReport {
            example: "square",
            parameters: vec![("theta".into(), "pi/8".into()), ("eps".into(), eps.to_exact_string())],
            items,
        },
    })
}

/// Rational point on the unit circle near angle `phi`, from a rational
/// approximation of `tan(phi / 2)` with denominator at most `precision`.
pub fn circle_point(phi: f64, precision: u64) -> Point<Rational> {
    let phi = (phi + PI).rem_euclid(2.0 * PI) - PI;
    let (flip, phi) = if phi.abs() <= PI / 2.0 { (false, phi) } else { (true, phi - PI.copysign(phi)) };
    let t = rational_approx((phi / 2.0).tan(), precision);
    let one = Rational::one();
    let den = &one + &t * &t;
    let p = Point::new((&one - &t * &t) / &den, (Rational::from_integer(2.into()) * &t) / &den);
    if flip {
        p.scale(&-one)
    } else {
        p
    }
}

pub struct MoitraExample {
    pub n: usize,
    pub w: ConvexPolygon<Rational>,
    pub v: ConvexPolygon<Rational>,
    pub v_prime: ConvexPolygon<Rational>,
    /// `3n x 3n`, columns are the vertices of `V'`.
    pub matrix: Matrix<Rational>,
    /// `Δ^{w_i}` for `V'`, one per vertex of `W`.
    pub triangles: Vec<TriangleCandidate<Rational>>,
    pub report: ExampleReport,
}

/// Regular `3n`-gon `W` (rational approximation) and the polygon `V` cut
/// out by the lines `w_i w_{i+n}`.
pub fn moitra_polygons(n: usize, precision: u64) -> Result<(ConvexPolygon<Rational>, ConvexPolygon<Rational>)> {
    if n < 2 {
        return Err(Error::OutOfRange("n must be at least 2".into()));
    }
    let big = 3 * n;
    let ws: Vec<Point<Rational>> = (0..big).map(|k| circle_point(2.0 * PI * k as f64 / big as f64, precision)).collect();
    let w = ConvexPolygon::from_ccw(ws.clone())
        .map_err(|_| Error::OutOfRange("precision too low for a convex polygon".into()))?;
    let origin = Point::new(Rational::zero(), Rational::zero());
    let planes: Vec<HalfPlane<Rational>> =
        (0..big).map(|i| center_side(&ws[i], &ws[(i + n) % big].sub(&ws[i]), &origin)).collect();
    let v = ConvexPolygon::from_halfplanes(&planes)?;
    if v.len() != big {
        return Err(Error::Internal(format!("inner polygon has {} vertices, expected {big}", v.len())));
    }
    Ok((w, v))
}

fn on_line<T: Scalar>(a: &Point<T>, b: &Point<T>, p: &Point<T>) -> bool {
    super::orient(a, b, p) == 0
}

pub fn moitra_example(n: usize, eps: &Rational, precision: u64) -> Result<MoitraExample> {
    if eps.signum_i8() <= 0 {
        return Err(Error::OutOfRange("eps must be positive".into()));
    }
    let (w, v) = moitra_polygons(n, precision)?;
    let big = 3 * n;
    let scale = Rational::one() + eps;
    let v_prime = ConvexPolygon::from_ccw(v.vertices().iter().map(|p| p.scale(&scale)).collect())?;
    if !w.contains_all(v_prime.vertices()) {
        return Err(Error::OutOfRange("eps too large: V' leaves W".into()));
    }
    let matrix = slack_matrix(&w, v_prime.vertices())?;
    let ws = w.vertices();
    let mut items = Vec::new();

    let cands = candidate_triangles(&w, &v_prime)?;
    let fits = cands.iter().filter(|c| c.is_valid()).count();
    let chart_decision = nnrank_le3(&matrix)?.decision;
    items.push(ReportItem::new(
        "i",
        fits == 0 && !chart_decision,
        format!("{} candidates, {fits} nested; chart decision nnrank<=3: {chart_decision}", cands.len()),
    ));

    // (ii): Δ^{w_i} for V' misses exactly the two vertices coming from the
    // edge of V on the line w_{i+n} w_{i+2n}.
    let mut triangles = Vec::new();
    let mut ok2 = true;
    let mut misses = Vec::new();
    let mut subsets_ok = true;
    for i in 0..big {
        let (a, b) = (&ws[(i + n) % big], &ws[(i + 2 * n) % big]);
        let excluded: Vec<usize> = (0..big).filter(|&j| on_line(a, b, &v.vertices()[j])).collect();
        let c = delta_w(&w, &v_prime, i)?;
        let tri = c.polygon();
        let outside: Vec<usize> = (0..big).filter(|&j| !tri.contains(&v_prime.vertices()[j])).collect();
        ok2 &= excluded.len() == 2 && outside == excluded && c.inside_w;
        misses.push(format!("w{}: misses {:?}", i + 1, outside.iter().map(|j| j + 1).collect::<Vec<_>>()));
        let keep: Vec<usize> = (0..big).filter(|j| !excluded.contains(j)).collect();
        let sub = matrix.select(&(0..big).collect::<Vec<_>>(), &keep);
        subsets_ok &= nnrank_le3(&sub)?.decision;
        triangles.push(c);
    }
    items.push(ReportItem::new("ii", ok2, misses.join("; ")));
    items.push(ReportItem::new(
        "ii_subsets",
        subsets_ok,
        "each column subset without an adjacent pair on a line w_{i+n} w_{i+2n} has nonnegative rank 3",
    ));

    // Combinatorics of the unperturbed configuration.
    let mut ok3 = true;
    for i in 0..big {
        let c = delta_w(&w, &v, i)?;
        let mut want = [ws[i].clone(), ws[(i + n) % big].clone(), ws[(i + 2 * n) % big].clone()];
        want.sort();
        ok3 &= c.key() == want && c.is_valid();
    }
    let base = candidate_triangles(&w, &v)?;
    let valid = base.iter().filter(|c| c.is_valid()).count();
    let edge_in_vertex_family = (0..big).all(|e| match delta_e(&w, &v, e) {
        Ok(Some(c)) => (0..big).any(|i| delta_w(&w, &v, i).map(|d| d.key() == c.key()).unwrap_or(false)),
        Ok(None) => true,
        Err(_) => false,
    });
    items.push(ReportItem::new(
        "combinatorics",
        ok3 && valid == n && edge_in_vertex_family,
        format!("Δ^(w_i) on w_i, w_(i+{n}), w_(i+{}); {valid} distinct nested triangles; edge triangles among them: {edge_in_vertex_family}", 2 * n),
    ));

    Ok(MoitraExample {
        n,
        w,
        v,
        v_prime,
        matrix,
        triangles,
        report: ExampleReport {
            example: "moitra",
            parameters: vec![
                ("n".into(), n.to_string()),
                ("eps".into(), eps.to_exact_string()),
                ("precision".into(), precision.to_string()),
            ],
            items,
        },
    })
}

/// For each subset size, whether every column subset of that size has
/// nonnegative rank at most three. Exponential; meant for small `3n`.
pub fn subset_profile(matrix: &Matrix<Rational>) -> Result<Vec<(usize, bool)>> {
    let cols = matrix.cols();
    if cols > 12 {
        return Err(Error::OutOfRange("subset sweep limited to 12 columns".into()));
    }
    let rows: Vec<usize> = (0..matrix.rows()).collect();
    let mut all_ok = vec![true; cols + 1];
    for mask in 1u32..(1 << cols) {
        let keep: Vec<usize> = (0..cols).filter(|j| mask & (1 << j) != 0).collect();
        if all_ok[keep.len()] && !nnrank_le3(&matrix.select(&rows, &keep))?.decision {
            all_ok[keep.len()] = false;
        }
    }
    Ok((1..=cols).map(|k| (k, all_ok[k])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    #[test]
    fn circle_points_are_exact() {
        for k in 0..12 {
            let p = circle_point(2.0 * PI * k as f64 / 12.0, 1000);
            assert_eq!(p.dot(&p), int(1));
        }
        assert_eq!(circle_point(PI, 10), Point::new(int(-1), int(0)));
    }

    #[test]
    fn square_octagon_at_pi_over_8() {
        let t = Sqrt2::new(-Rational::one(), Rational::one());
        let (w, v) = square_polygons(&t).unwrap();
        assert_eq!(w.len(), 4);
        assert_eq!(v.len(), 8);
        assert!(v.vertices().iter().all(|p| w.strictly_contains(p)));
        let cands = candidate_triangles(&w, &v).unwrap();
        let edge: Vec<_> = cands.iter().filter(|c| matches!(c.anchor, super::super::Anchor::Edge { .. })).collect();
        assert!(edge.is_empty(), "edge triangles coincide with corner triangles");
        for e in 0..v.len() {
            if let Some(c) = delta_e(&w, &v, e).unwrap() {
                assert!((0..4).any(|i| delta_w(&w, &v, i).unwrap().key() == c.key()));
            }
        }
    }

    #[test]
    fn square_report_passes_at_one_percent() {
        let ex = square_example(&frac(1, 100)).unwrap();
        assert!(ex.report.passed(), "{:#?}", ex.report);
        assert_eq!((ex.matrix.rows(), ex.matrix.cols()), (4, 8));
        assert!(square_example(&frac(1, 10)).is_err());
    }

    #[test]
    fn square_slopes_away_from_pi_over_8() {
        let status = |t: Rational| {
            let (w, v) = square_polygons(&t).unwrap();
            boundary_test(&slack_matrix(&w, v.vertices()).unwrap()).unwrap().status
        };
        let tan_pi_16 = rational_approx((PI / 16.0).tan(), 1000);
        let tan_3pi_16 = rational_approx((3.0 * PI / 16.0).tan(), 1000);
        assert_eq!(status(tan_pi_16), BoundaryStatus::NotInModel);
        assert_eq!(status(tan_3pi_16), BoundaryStatus::Interior);
    }

    #[test]
    fn hexagon_report_passes() {
        let ex = moitra_example(2, &frac(1, 1000), 1_000_000).unwrap();
        assert!(ex.report.passed(), "{:#?}", ex.report);
        assert_eq!(ex.matrix.rows(), 6);
    }

    #[test]
    fn hexagon_subset_profile() {
        let ex = moitra_example(2, &frac(1, 1000), 1_000_000).unwrap();
        let profile = subset_profile(&ex.matrix).unwrap();
        let ok: Vec<usize> = profile.iter().filter(|(_, ok)| *ok).map(|(k, _)| *k).collect();
        assert_eq!(ok, vec![1, 2, 3]);
    }

    #[test]
    fn moitra_eps_monotone() {
        let grid = [frac(1, 10000), frac(1, 1000), frac(1, 100), frac(1, 20)];
        let passes: Vec<bool> = grid
            .iter()
            .map(|e| moitra_example(2, e, 1_000_000).map(|x| x.report.item("i").unwrap().pass).unwrap_or(false))
            .collect();
        // Once item (i) fails, it keeps failing for larger eps.
        assert!(passes.windows(2).all(|w| w[0] || !w[1]), "{passes:?}");
        assert!(passes[0]);
    }
}
