use serde::Serialize;

use super::{orient, ConvexPolygon, Point};
use crate::arith::Scalar;
use crate::error::{Error, Result};

/// Which construction produced a candidate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Anchor {
    /// `Δ^w` for vertex `w` of the outer polygon.
    Vertex { w: usize },
    /// `Δ^e` for edge `e` of the inner polygon.
    Edge { e: usize },
    /// The inner polygon itself, when it is a triangle.
    Inner,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct TriangleCandidate<T: Scalar> {
    /// Counterclockwise.
    pub vertices: [Point<T>; 3],
    pub anchor: Anchor,
    pub contains_v: bool,
    pub inside_w: bool,
}

impl<T: Scalar> TriangleCandidate<T> {
    pub fn new(pts: [Point<T>; 3], anchor: Anchor, v: &ConvexPolygon<T>, w: &ConvexPolygon<T>) -> Self {
        let [a, b, c] = pts;
        let vertices = if orient(&a, &b, &c) < 0 { [a, c, b] } else { [a, b, c] };
        let tri = ConvexPolygon::from_ccw(vertices.to_vec()).ok().filter(|t| !t.is_degenerate());
        let contains_v = tri.as_ref().is_some_and(|t| t.contains_all(v.vertices()));
        let inside_w = tri.is_some() && w.contains_all(vertices.iter());
        TriangleCandidate { vertices, anchor, contains_v, inside_w }
    }

    /// `V ⊆ Δ ⊆ W` with positive area.
    pub fn is_valid(&self) -> bool {
        self.contains_v && self.inside_w
    }

    pub fn polygon(&self) -> ConvexPolygon<T> {
        ConvexPolygon::hull(self.vertices.iter().cloned())
    }

    /// Order-independent identity.
    pub fn key(&self) -> [Point<T>; 3] {
        let mut k = self.vertices.clone();
        k.sort();
        k
    }

    pub fn edges(&self) -> [(&Point<T>, &Point<T>); 3] {
        let v = &self.vertices;
        [(&v[0], &v[1]), (&v[1], &v[2]), (&v[2], &v[0])]
    }
}

/// Bounding rays `(right, left)` of the smallest cone at `p` containing
/// `pts`; points equal to `p` are ignored. Among collinear directions the
/// farthest point is taken.
pub fn cone_rays<T: Scalar>(p: &Point<T>, pts: &[Point<T>]) -> Result<(Point<T>, Point<T>)> {
    let dirs: Vec<Point<T>> = pts.iter().map(|q| q.sub(p)).filter(|d| !d.is_origin()).collect();
    let pick = |sign: i8| -> Result<Point<T>> {
        let ok: Vec<&Point<T>> =
            dirs.iter().filter(|d| dirs.iter().all(|e| d.cross(e).signum_i8() * sign >= 0)).collect();
        let first = ok.first().ok_or(Error::InvalidAnchor)?;
        if ok.iter().any(|d| d.dot(first).signum_i8() < 0) {
            return Err(Error::InvalidAnchor);
        }
        Ok((*ok.iter().max_by(|a, b| a.dot(a).cmp(&b.dot(b))).expect("nonempty")).clone())
    };
    Ok((pick(1)?, pick(-1)?))
}

fn exit_point<T: Scalar>(w: &ConvexPolygon<T>, p: &Point<T>, d: &Point<T>) -> Result<Point<T>> {
    Ok(p.add(&d.scale(&w.ray_exit(p, d)?)))
}

/// `Δ^w`: the vertex `w` and the far exits of the two rays bounding `V`.
pub fn delta_w<T: Scalar>(w: &ConvexPolygon<T>, v: &ConvexPolygon<T>, wi: usize) -> Result<TriangleCandidate<T>> {
    if v.is_degenerate() {
        return Err(Error::DegenerateInput("inner polygon has zero area".into()));
    }
    let anchor = &w.vertices()[wi];
    if v.contains(anchor) {
        return Err(Error::InvalidAnchor);
    }
    let (r, l) = cone_rays(anchor, v.vertices())?;
    let pts = [anchor.clone(), exit_point(w, anchor, &r)?, exit_point(w, anchor, &l)?];
    Ok(TriangleCandidate::new(pts, Anchor::Vertex { w: wi }, v, w))
}

/// `Δ^e`: the chord of `W` through edge `e` of `V`, closed off by the
/// other bounding ray at each end of the chord. `None` when those rays do
/// not meet inside `W`.
pub fn delta_e<T: Scalar>(
    w: &ConvexPolygon<T>,
    v: &ConvexPolygon<T>,
    ei: usize,
) -> Result<Option<TriangleCandidate<T>>> {
    if v.is_degenerate() {
        return Err(Error::DegenerateInput("inner polygon has zero area".into()));
    }
    let (v1, v2) = v.edge(ei);
    let d = v2.sub(v1);
    let back = d.scale(&-T::one());
    let w1 = exit_point(w, v1, &back)?;
    let w2 = exit_point(w, v1, &d)?;
    let other = |at: &Point<T>| -> Result<Point<T>> {
        let (r, l) = cone_rays(at, v.vertices())?;
        if r.cross(&d).is_zero() {
            Ok(l)
        } else {
            Ok(r)
        }
    };
    let (l1, l2) = (other(&w1)?, other(&w2)?);
    let denom = l1.cross(&l2);
    if denom.is_zero() {
        return Ok(None);
    }
    let gap = w2.sub(&w1);
    let s = gap.cross(&l2) / denom.clone();
    let t = gap.cross(&l1) / denom;
    if s.signum_i8() <= 0 || t.signum_i8() <= 0 {
        return Ok(None);
    }
    let apex = w1.add(&l1.scale(&s));
    if !w.contains(&apex) {
        return Ok(None);
    }
    Ok(Some(TriangleCandidate::new([w1, w2, apex], Anchor::Edge { e: ei }, v, w)))
}

/// All `Δ^w` and defined `Δ^e`, deduplicated by vertex set (the first
/// construction is kept). Anchors lying in `V`, possible only when `V`
/// touches the boundary of `W`, are skipped.
pub fn candidate_triangles<T: Scalar>(w: &ConvexPolygon<T>, v: &ConvexPolygon<T>) -> Result<Vec<TriangleCandidate<T>>> {
    if v.is_degenerate() || w.is_degenerate() {
        return Err(Error::DegenerateInput("polygons must have positive area".into()));
    }
    let mut out: Vec<TriangleCandidate<T>> = Vec::new();
    let mut push = |c: TriangleCandidate<T>| {
        if !out.iter().any(|o| o.key() == c.key()) {
            out.push(c);
        }
    };
    for wi in 0..w.len() {
        match delta_w(w, v, wi) {
            Ok(c) => push(c),
            Err(Error::InvalidAnchor) => {}
            Err(e) => return Err(e),
        }
    }
    for ei in 0..v.len() {
        match delta_e(w, v, ei) {
            Ok(Some(c)) => push(c),
            Ok(None) | Err(Error::InvalidAnchor) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{frac, int, Rational};

    fn q(x: Rational, y: Rational) -> Point<Rational> {
        Point::new(x, y)
    }

    fn unit_square() -> ConvexPolygon<Rational> {
        ConvexPolygon::hull([(0, 0), (1, 0), (1, 1), (0, 1)].map(|(x, y)| Point::from_i64(x, y)))
    }

    fn centre_square() -> ConvexPolygon<Rational> {
        ConvexPolygon::hull(
            [(1, 1), (3, 1), (3, 3), (1, 3)].map(|(x, y)| q(frac(x, 4), frac(y, 4))),
        )
    }

    #[test]
    fn corner_triangle_golden() {
        let (w, v) = (unit_square(), centre_square());
        let c = delta_w(&w, &v, 0).unwrap();
        assert_eq!(c.key(), [q(int(0), int(0)), q(frac(1, 3), int(1)), q(int(1), frac(1, 3))]);
        assert!(c.inside_w);
        assert!(!c.contains_v);
    }

    #[test]
    fn corner_triangles_are_symmetric() {
        let (w, v) = (unit_square(), centre_square());
        let swap = |p: &Point<Rational>| q(p.y.clone(), p.x.clone());
        let flip = |p: &Point<Rational>| q(int(1) - &p.x, p.y.clone());
        let tris: Vec<_> = (0..4).map(|i| delta_w(&w, &v, i).unwrap()).collect();
        let image = |c: &TriangleCandidate<Rational>, f: &dyn Fn(&Point<Rational>) -> Point<Rational>| {
            let mut k = c.vertices.clone().map(|p| f(&p));
            k.sort();
            k
        };
        for t in &tris {
            assert!(tris.iter().any(|u| u.key() == image(t, &swap)));
            assert!(tris.iter().any(|u| u.key() == image(t, &flip)));
        }
    }

    #[test]
    fn centre_square_has_four_candidates() {
        let c = candidate_triangles(&unit_square(), &centre_square()).unwrap();
        assert_eq!(c.len(), 4);
        assert!(c.iter().all(|t| matches!(t.anchor, Anchor::Vertex { .. })));
        assert!(delta_e(&unit_square(), &centre_square(), 0).unwrap().is_none());
    }

    #[test]
    fn thin_inner_polygon_gives_no_edge_triangle() {
        let w = unit_square();
        let v = ConvexPolygon::hull([
            q(frac(2, 5), frac(1, 20)),
            q(frac(3, 5), frac(1, 20)),
            q(frac(99, 100), frac(9, 10)),
            q(frac(1, 100), frac(9, 10)),
        ]);
        let bottom = (0..4).find(|&i| v.edge(i).0.y == frac(1, 20) && v.edge(i).1.y == frac(1, 20)).unwrap();
        assert!(delta_e(&w, &v, bottom).unwrap().is_none());
    }

    #[test]
    fn small_triangle_in_large_outer_polygon() {
        let w = ConvexPolygon::hull([(0, 0), (100, 0), (100, 100), (0, 100)].map(|(x, y)| Point::<Rational>::from_i64(x, y)));
        let v = ConvexPolygon::hull([(50, 50), (51, 50), (50, 51)].map(|(x, y)| Point::from_i64(x, y)));
        for wi in 0..4 {
            assert!(delta_w(&w, &v, wi).unwrap().is_valid());
        }
    }

    #[test]
    fn anchor_inside_inner_polygon() {
        let w = unit_square();
        assert_eq!(delta_w(&w, &w, 0).unwrap_err(), Error::InvalidAnchor);
        let seg = ConvexPolygon::hull([q(int(0), int(0)), q(int(1), int(1))]);
        assert!(matches!(delta_w(&w, &seg, 1), Err(Error::DegenerateInput(_))));
    }
}
