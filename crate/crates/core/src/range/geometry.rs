//! Planar convex geometry on complex points.

use crate::error::{Error, Result};
use crate::quat::ComplexNum;

/// Cross-product tolerance for collinear elimination.
pub const COLLINEAR_TOL: f64 = 1e-12;

fn cross(o: ComplexNum, a: ComplexNum, b: ComplexNum) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Convex hull vertices in counter-clockwise order (monotone chain). Vertices
/// within `COLLINEAR_TOL` (relative) of the line through their neighbours are
/// dropped; a degenerate hull has one or two vertices.
pub fn hull2d(points: &[ComplexNum]) -> Result<Vec<ComplexNum>> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut pts: Vec<ComplexNum> = points.iter().copied().filter(|z| z.is_finite()).collect();
    if pts.is_empty() {
        return Err(Error::InvalidArgument("no finite points".into()));
    }
    pts.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    pts.dedup();
    let scale = pts.iter().map(|z| z.norm()).fold(1.0, f64::max);
    if pts.len() == 1 {
        return Ok(pts);
    }
    let mut hull: Vec<ComplexNum> = Vec::with_capacity(64);
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &ComplexNum>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    Ok(drop_collinear(hull, COLLINEAR_TOL * scale))
}

/// Removes vertices lying within `tol` of the segment joining their neighbours.
fn drop_collinear(mut hull: Vec<ComplexNum>, tol: f64) -> Vec<ComplexNum> {
    loop {
        let m = hull.len();
        if m <= 2 {
            if m == 2 && (hull[0] - hull[1]).norm() <= tol {
                hull.pop();
            }
            return hull;
        }
        let found = (0..m).find(|&k| {
            let (a, v, b) = (hull[(k + m - 1) % m], hull[k], hull[(k + 1) % m]);
            segment_distance(a, b, v) <= tol
        });
        match found {
            Some(k) => {
                hull.remove(k);
            }
            None => return hull,
        }
    }
}

/// Distance from `z` to the segment `[a, b]`.
pub fn segment_distance(a: ComplexNum, b: ComplexNum, z: ComplexNum) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (z - (a + d * t)).norm()
}

/// Signed distance to the boundary of a hull with at least three vertices:
/// positive inside, negative outside.
fn polygon_signed_distance(hull: &[ComplexNum], z: ComplexNum) -> f64 {
    let m = hull.len();
    let mut inside = true;
    let mut edge_dist = f64::INFINITY;
    for k in 0..m {
        let (a, b) = (hull[k], hull[(k + 1) % m]);
        let len = (b - a).norm();
        if len > 0.0 && cross(a, b, z) / len < 0.0 {
            inside = false;
        }
        edge_dist = edge_dist.min(segment_distance(a, b, z));
    }
    if inside {
        edge_dist
    } else {
        -edge_dist
    }
}

/// Euclidean distance from `z` to the convex set spanned by `hull` (zero inside).
pub fn hull_distance(hull: &[ComplexNum], z: ComplexNum) -> f64 {
    match hull.len() {
        0 => f64::INFINITY,
        1 => (z - hull[0]).norm(),
        2 => segment_distance(hull[0], hull[1], z),
        _ => (-polygon_signed_distance(hull, z)).max(0.0),
    }
}

/// Membership with slack `tol`.
pub fn point_in_hull(hull: &[ComplexNum], z: ComplexNum, tol: f64) -> Result<bool> {
    if hull.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(hull_distance(hull, z) <= tol)
}

/// Distance from `z` to the relative boundary of the hull, negative outside.
/// For a segment the relative boundary is its two endpoints.
pub fn hull_margin(hull: &[ComplexNum], z: ComplexNum, tol: f64) -> f64 {
    match hull.len() {
        0 => f64::NEG_INFINITY,
        1 => -(z - hull[0]).norm(),
        2 => {
            let d = segment_distance(hull[0], hull[1], z);
            if d <= tol {
                (z - hull[0]).norm().min((z - hull[1]).norm())
            } else {
                -d
            }
        }
        _ => polygon_signed_distance(hull, z),
    }
}

/// Shoelace area of a counter-clockwise polygon.
pub fn polygon_area(hull: &[ComplexNum]) -> f64 {
    let m = hull.len();
    if m < 3 {
        return 0.0;
    }
    (0..m)
        .map(|k| {
            let (a, b) = (hull[k], hull[(k + 1) % m]);
            a.re * b.im - a.im * b.re
        })
        .sum::<f64>()
        * 0.5
}

/// Symmetric Hausdorff distance between two finite point sets.
pub fn hausdorff(p: &[ComplexNum], q: &[ComplexNum]) -> Result<f64> {
    if p.is_empty() || q.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(directed(p, q).max(directed(q, p)))
}

/// `max_{x∈p} min_{y∈q} |x - y|`.
pub fn directed(p: &[ComplexNum], q: &[ComplexNum]) -> f64 {
    p.iter()
        .map(|x| q.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

/// Hausdorff distance between the convex sets spanned by two hulls. For convex
/// sets the maxima are attained at vertices.
pub fn hull_hausdorff(p: &[ComplexNum], q: &[ComplexNum]) -> Result<f64> {
    if p.is_empty() || q.is_empty() {
        return Err(Error::EmptyInput);
    }
    let a = p.iter().map(|&z| hull_distance(q, z)).fold(0.0, f64::max);
    let b = q.iter().map(|&z| hull_distance(p, z)).fold(0.0, f64::max);
    Ok(a.max(b))
}

/// Points spaced at most `step` apart along the closed polyline through `vertices`.
pub fn discretize_boundary(vertices: &[ComplexNum], step: f64) -> Vec<ComplexNum> {
    let m = vertices.len();
    if m <= 1 {
        return vertices.to_vec();
    }
    let mut out = Vec::new();
    let edges = if m == 2 { 1 } else { m };
    for k in 0..edges {
        let (a, b) = (vertices[k], vertices[(k + 1) % m]);
        let pieces = ((b - a).norm() / step).ceil().max(1.0) as usize;
        for s in 0..pieces {
            out.push(a + (b - a) * (s as f64 / pieces as f64));
        }
    }
    if m == 2 {
        out.push(vertices[1]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> ComplexNum {
        ComplexNum::new(re, im)
    }

    #[test]
    fn square() {
        let pts = [c(1.0, 1.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0), c(0.5, 0.5), c(0.5, 0.0)];
        let h = hull2d(&pts).unwrap();
        assert_eq!(h, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)]);
        assert!((polygon_area(&h) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_hulls() {
        assert_eq!(hull2d(&[c(1.0, 2.0), c(1.0, 2.0)]).unwrap(), vec![c(1.0, 2.0)]);
        let h = hull2d(&[c(0.0, 0.0), c(0.5, 0.5), c(1.0, 1.0)]).unwrap();
        assert_eq!(h, vec![c(0.0, 0.0), c(1.0, 1.0)]);
        assert!(hull2d(&[]).is_err());
    }

    #[test]
    fn triangle_membership() {
        let h = hull2d(&[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        // barycentric oracle: (0.25, 0.25) = 0.5·0 + 0.25·1 + 0.25·i
        assert!(point_in_hull(&h, c(0.25, 0.25), 1e-9).unwrap());
        assert!(!point_in_hull(&h, c(0.6, 0.6), 1e-9).unwrap());
        assert!(point_in_hull(&h, c(0.5, 0.5 + 1e-10), 1e-9).unwrap());
        assert!((hull_distance(&h, c(1.0, 1.0)) - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn hausdorff_examples() {
        assert_eq!(hausdorff(&[c(0.0, 0.0)], &[c(1.0, 0.0)]).unwrap(), 1.0);
        let a = [c(0.0, 0.0), c(2.0, 0.0)];
        let b = [c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)];
        assert_eq!(hausdorff(&a, &b).unwrap(), 1.0);
        assert_eq!(hull_hausdorff(&a, &b[..]).unwrap(), 0.0);
    }

    #[test]
    fn margins() {
        let seg = [c(0.0, -1.0), c(0.0, 1.0)];
        assert!((hull_margin(&seg, c(0.0, 0.0), 1e-12) - 1.0).abs() < 1e-15);
        assert!(hull_margin(&seg, c(0.5, 0.0), 1e-12) < 0.0);
        let sq = hull2d(&[c(-1.0, -1.0), c(1.0, -1.0), c(1.0, 1.0), c(-1.0, 1.0)]).unwrap();
        assert!((hull_margin(&sq, c(0.0, 0.0), 0.0) - 1.0).abs() < 1e-15);
        assert!((hull_margin(&sq, c(2.0, 0.0), 0.0) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn discretization_spacing() {
        let pts = discretize_boundary(&[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)], 0.1);
        for w in pts.windows(2) {
            assert!((w[1] - w[0]).norm() <= 0.1 + 1e-12);
        }
        let seg = discretize_boundary(&[c(0.0, 0.0), c(0.0, 1.0)], 0.25);
        assert_eq!(seg.len(), 5);
    }

    proptest! {
        #[test]
        fn hull_is_convex_and_contains_points(
            pts in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 1..60)
        ) {
            let pts: Vec<ComplexNum> = pts.into_iter().map(|(a, b)| c(a, b)).collect();
            let h = hull2d(&pts).unwrap();
            if h.len() >= 3 {
                for k in 0..h.len() {
                    let (a, b, d) = (h[k], h[(k + 1) % h.len()], h[(k + 2) % h.len()]);
                    prop_assert!(cross(a, b, d) > 0.0);
                }
            }
            for &p in &pts {
                prop_assert!(point_in_hull(&h, p, 1e-9).unwrap());
            }
        }
    }
}
