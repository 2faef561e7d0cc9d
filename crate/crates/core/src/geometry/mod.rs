//! Planar slices of a rank-3 nonnegative matrix and nested triangles.
//!
//! A nonnegative `m x n` matrix `M` of rank three gives two polygons in
//! the plane `Span(M) ∩ {sum x_i = 1}`: `V`, the convex hull of the
//! normalized columns, and `W`, the part of that plane inside the
//! nonnegative orthant. `M` has nonnegative rank three exactly when a
//! triangle fits between them.

mod chart;
mod decide;
mod examples;
mod svg;
mod triangles;

pub use chart::*;
pub use decide::*;
pub use examples::*;
pub use svg::*;
pub use triangles::*;

use serde::ser::SerializeTuple;
use serde::{Serialize, Serializer};

use crate::arith::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point<T> {
    pub fn new(x: T, y: T) -> Self {
        Point { x, y }
    }

    pub fn from_i64(x: i64, y: i64) -> Self {
        Point::new(T::from_i64(x), T::from_i64(y))
    }

    pub fn add(&self, o: &Point<T>) -> Point<T> {
        Point::new(self.x.clone() + o.x.clone(), self.y.clone() + o.y.clone())
    }

    pub fn sub(&self, o: &Point<T>) -> Point<T> {
        Point::new(self.x.clone() - o.x.clone(), self.y.clone() - o.y.clone())
    }

    pub fn scale(&self, s: &T) -> Point<T> {
        Point::new(self.x.clone() * s.clone(), self.y.clone() * s.clone())
    }

    pub fn cross(&self, o: &Point<T>) -> T {
        self.x.clone() * o.y.clone() - self.y.clone() * o.x.clone()
    }

    pub fn dot(&self, o: &Point<T>) -> T {
        self.x.clone() * o.x.clone() + self.y.clone() * o.y.clone()
    }

    pub fn is_origin(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

impl<T: Scalar> Serialize for Point<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&self.x.to_exact_string())?;
        t.serialize_element(&self.y.to_exact_string())?;
        t.end()
    }
}

/// Sign of the turn `a -> b -> c`: 1 for counterclockwise.
pub fn orient<T: Scalar>(a: &Point<T>, b: &Point<T>, c: &Point<T>) -> i8 {
    b.sub(a).cross(&c.sub(a)).signum_i8()
}

/// Whether `p` lies on the closed segment `[a, b]`.
pub fn on_segment<T: Scalar>(a: &Point<T>, b: &Point<T>, p: &Point<T>) -> bool {
    orient(a, b, p) == 0 && p.sub(a).dot(&p.sub(b)).signum_i8() <= 0
}

/// `a x + b y + c >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfPlane<T> {
    pub a: T,
    pub b: T,
    pub c: T,
}

impl<T: Scalar> HalfPlane<T> {
    /// The closed half-plane to the left of the directed line `p -> q`.
    pub fn left_of(p: &Point<T>, q: &Point<T>) -> Self {
        let d = q.sub(p);
        HalfPlane { a: -d.y.clone(), b: d.x.clone(), c: d.y.clone() * p.x.clone() - d.x.clone() * p.y.clone() }
    }

    pub fn eval(&self, p: &Point<T>) -> T {
        self.a.clone() * p.x.clone() + self.b.clone() * p.y.clone() + self.c.clone()
    }

    /// Rate of change along a direction.
    pub fn linear(&self, d: &Point<T>) -> T {
        self.a.clone() * d.x.clone() + self.b.clone() * d.y.clone()
    }

    pub fn is_constant(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn meet(&self, o: &HalfPlane<T>) -> Option<Point<T>> {
        let det = self.a.clone() * o.b.clone() - o.a.clone() * self.b.clone();
        if det.is_zero() {
            return None;
        }
        let x = (self.b.clone() * o.c.clone() - o.b.clone() * self.c.clone()) / det.clone();
        let y = (o.a.clone() * self.c.clone() - self.a.clone() * o.c.clone()) / det;
        Some(Point::new(x, y))
    }
}

/// Convex polygon with counterclockwise vertices and no three collinear.
/// Fewer than three vertices means the polygon is degenerate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct ConvexPolygon<T> {
    vertices: Vec<Point<T>>,
}

impl<T: Scalar> ConvexPolygon<T> {
    /// Convex hull (monotone chain); collinear boundary points are dropped.
    pub fn hull(points: impl IntoIterator<Item = Point<T>>) -> Self {
        let mut pts: Vec<Point<T>> = points.into_iter().collect();
        pts.sort();
        pts.dedup();
        if pts.len() < 3 {
            return ConvexPolygon { vertices: pts };
        }
        let chain = |iter: &mut dyn Iterator<Item = &Point<T>>| {
            let mut out: Vec<Point<T>> = Vec::new();
            for p in iter {
                while out.len() >= 2 && orient(&out[out.len() - 2], &out[out.len() - 1], p) <= 0 {
                    out.pop();
                }
                out.push(p.clone());
            }
            out.pop();
            out
        };
        let mut lower = chain(&mut pts.iter());
        let upper = chain(&mut pts.iter().rev());
        lower.extend(upper);
        if lower.len() < 3 {
            // All points collinear: keep the two extremes.
            return ConvexPolygon { vertices: vec![pts[0].clone(), pts[pts.len() - 1].clone()] };
        }
        ConvexPolygon { vertices: lower }
    }

    /// Intersection of half-planes, which must be bounded.
    pub fn from_halfplanes(planes: &[HalfPlane<T>]) -> Result<Self> {
        if planes.iter().any(|h| h.is_constant() && h.c.signum_i8() < 0) {
            return Err(Error::DegenerateInput("empty intersection of half-planes".into()));
        }
        let lines: Vec<&HalfPlane<T>> = planes.iter().filter(|h| !h.is_constant()).collect();
        let mut pts = Vec::new();
        for (i, h) in lines.iter().enumerate() {
            for g in &lines[i + 1..] {
                if let Some(p) = h.meet(g) {
                    if planes.iter().all(|k| k.eval(&p).signum_i8() >= 0) {
                        pts.push(p);
                    }
                }
            }
        }
        Ok(Self::hull(pts))
    }

    /// Takes vertices as given after checking strict convexity and
    /// counterclockwise order.
    pub fn from_ccw(vertices: Vec<Point<T>>) -> Result<Self> {
        let n = vertices.len();
        if n >= 3 {
            for i in 0..n {
                if orient(&vertices[i], &vertices[(i + 1) % n], &vertices[(i + 2) % n]) <= 0 {
                    return Err(Error::DegenerateInput("vertices are not strictly convex and counterclockwise".into()));
                }
            }
        }
        Ok(ConvexPolygon { vertices })
    }

    pub fn vertices(&self) -> &[Point<T>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_degenerate(&self) -> bool {
        self.vertices.len() < 3
    }

    /// Edge `i` runs from vertex `i` to vertex `i + 1`.
    pub fn edge(&self, i: usize) -> (&Point<T>, &Point<T>) {
        let n = self.vertices.len();
        (&self.vertices[i % n], &self.vertices[(i + 1) % n])
    }

    pub fn edge_halfplanes(&self) -> Vec<HalfPlane<T>> {
        (0..self.len()).map(|i| {
            let (p, q) = self.edge(i);
            HalfPlane::left_of(p, q)
        }).collect()
    }

    /// Twice the signed area.
    pub fn area2(&self) -> T {
        let n = self.vertices.len();
        (0..n).fold(T::zero(), |acc, i| acc + self.vertices[i].cross(&self.vertices[(i + 1) % n]))
    }

    /// Closed containment.
    pub fn contains(&self, p: &Point<T>) -> bool {
        match self.vertices.len() {
            0 => false,
            1 => self.vertices[0] == *p,
            2 => on_segment(&self.vertices[0], &self.vertices[1], p),
            n => (0..n).all(|i| orient(&self.vertices[i], &self.vertices[(i + 1) % n], p) >= 0),
        }
    }

    pub fn strictly_contains(&self, p: &Point<T>) -> bool {
        let n = self.vertices.len();
        n >= 3 && (0..n).all(|i| orient(&self.vertices[i], &self.vertices[(i + 1) % n], p) > 0)
    }

    pub fn on_boundary(&self, p: &Point<T>) -> bool {
        self.contains(p) && !self.strictly_contains(p)
    }

    pub fn contains_all<'a>(&self, pts: impl IntoIterator<Item = &'a Point<T>>) -> bool {
        pts.into_iter().all(|p| self.contains(p))
    }

    /// Same vertex set, independent of the starting vertex.
    pub fn same_vertices(&self, other: &ConvexPolygon<T>) -> bool {
        let mut a = self.vertices.clone();
        let mut b = other.vertices.clone();
        a.sort();
        b.sort();
        a == b
    }

    /// Largest `t >= 0` with `p + t d` in the polygon; `p` must be inside.
    pub fn ray_exit(&self, p: &Point<T>, d: &Point<T>) -> Result<T> {
        let mut best: Option<T> = None;
        for h in self.edge_halfplanes() {
            let rate = h.linear(d);
            if rate.signum_i8() < 0 {
                let t = -h.eval(p) / rate;
                if best.as_ref().is_none_or(|b| t < *b) {
                    best = Some(t);
                }
            }
        }
        best.ok_or_else(|| Error::DegenerateInput("ray does not leave the polygon".into()))
    }
}
