use std::fmt::Write as _;
use std::path::Path;

use super::{ConvexPolygon, Point, TriangleCandidate};
use crate::arith::Scalar;
use crate::error::Result;

const CANVAS: f64 = 480.0;
const MARGIN: f64 = 20.0;

/// Deterministic SVG of `W`, the inner polygons and triangles. Coordinates
/// are rounded for display only.
pub fn svg_render<T: Scalar>(
    w: &ConvexPolygon<T>,
    inner: &[&ConvexPolygon<T>],
    triangles: &[TriangleCandidate<T>],
) -> String {
    let pts: Vec<(f64, f64)> = w.vertices().iter().map(Point::to_f64).collect();
    let (xmin, xmax) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.0), b.max(p.0)));
    let (ymin, ymax) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.1), b.max(p.1)));
    let span = (xmax - xmin).max(ymax - ymin).max(f64::MIN_POSITIVE);
    let k = (CANVAS - 2.0 * MARGIN) / span;
    let coords = |vs: &[Point<T>]| {
        vs.iter()
            .map(|p| {
                let (x, y) = p.to_f64();
                format!("{:.3},{:.3}", MARGIN + (x - xmin) * k, CANVAS - MARGIN - (y - ymin) * k)
            })
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS}" height="{CANVAS}" viewBox="0 0 {CANVAS} {CANVAS}">"#);
    let _ = writeln!(out, r#"<polygon class="outer" points="{}" fill="none" stroke="black" stroke-width="1.5"/>"#, coords(w.vertices()));
    for t in triangles {
        let _ = writeln!(
            out,
            r##"<polygon class="triangle" points="{}" fill="none" stroke="#c0392b" stroke-width="0.8" stroke-dasharray="4 2"/>"##,
            coords(&t.vertices)
        );
    }
    for p in inner {
        let _ = writeln!(out, r##"<polygon class="inner" points="{}" fill="#2e86c1" fill-opacity="0.25" stroke="#2e86c1"/>"##, coords(p.vertices()));
    }
    out.push_str("</svg>\n");
    out
}

pub fn write_svg(path: &Path, svg: &str) -> Result<()> {
    std::fs::write(path, svg)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::square_example;
    use crate::arith::frac;

    #[test]
    fn square_render() {
        let ex = square_example(&frac(1, 100)).unwrap();
        let svg = svg_render(&ex.w, &[&ex.v], &ex.triangles);
        assert_eq!(svg.matches(r#"class="outer""#).count(), 1);
        assert_eq!(svg.matches(r#"class="inner""#).count(), 1);
        assert!(svg.matches(r#"class="triangle""#).count() >= 4);
        assert_eq!(svg, svg_render(&ex.w, &[&ex.v], &ex.triangles));
        let plain = svg_render(&ex.w, &[&ex.v], &[]);
        assert_eq!(plain.matches("<polygon").count(), 2);
        let dir = std::env::temp_dir().join("nonneg3-svg-test.svg");
        write_svg(&dir, &plain).unwrap();
        assert_eq!(std::fs::read_to_string(&dir).unwrap(), plain);
    }
}
