//! First variation of area.

use crate::geom::{Point3, TriSurfaceMesh};

/// Triangles whose doubled area is below this fraction of their longest
/// squared edge are treated as degenerate.
pub(crate) const DEGENERATE_RATIO: f64 = 1e-14;

pub(crate) fn is_degenerate(m: &TriSurfaceMesh, t: usize) -> bool {
    let cross = m.tri_cross(t).norm();
    let longest = (0..3).map(|k| m.tri_edge(t, k).norm_sq()).fold(0.0, f64::max);
    !(cross > DEGENERATE_RATIO * longest)
}

/// Area gradient per vertex and the number of degenerate triangles skipped.
pub fn area_gradient_with_stats(m: &TriSurfaceMesh) -> (Vec<Point3>, usize) {
    let mut g = vec![Point3::ZERO; m.vertex_count()];
    let mut degenerate = 0;
    for t in 0..m.triangle_count() {
        if is_degenerate(m, t) {
            degenerate += 1;
            continue;
        }
        let n = m.tri_cross(t).normalized();
        let tri = m.triangles[t];
        for k in 0..3 {
            // edge opposite corner k, from corner k+1 to corner k+2
            let e = m.tri_edge(t, (k + 1) % 3);
            g[tri[k]] += n.cross(e) * 0.5;
        }
    }
    for (gv, &fixed) in g.iter_mut().zip(&m.boundary_fixed) {
        if fixed {
            *gv = Point3::ZERO;
        }
    }
    (g, degenerate)
}

/// Triangles flatter than this (doubled area over longest squared edge) are
/// treated as collapsed onto a segment by the descent.
pub(crate) const KINK_RATIO: f64 = 1e-4;

pub(crate) fn is_kinked(m: &TriSurfaceMesh, t: usize) -> bool {
    let cross = m.tri_cross(t).norm();
    let longest = (0..3).map(|k| m.tri_edge(t, k).norm_sq()).fold(0.0, f64::max);
    !(cross > KINK_RATIO * longest)
}

/// Gradient used for descent and for the stopping test. Area has a kink at
/// a collapsed triangle: it grows like `|e| d / 2` whichever way a corner
/// moves off the segment, `e` being the opposite edge. So instead of the
/// ill-conditioned normal of a nearly collapsed triangle, each of its
/// corners gets the least-norm choice from that set, which cancels up to
/// `|e| / 2` of the remaining pull across the segment. Returns the gradient
/// and the number of collapsed triangles.
pub(crate) fn descent_gradient(m: &TriSurfaceMesh) -> (Vec<Point3>, usize) {
    let mut g = vec![Point3::ZERO; m.vertex_count()];
    let mut kinked = Vec::new();
    for t in 0..m.triangle_count() {
        if is_kinked(m, t) {
            kinked.push(t);
            continue;
        }
        let n = m.tri_cross(t).normalized();
        let tri = m.triangles[t];
        for k in 0..3 {
            g[tri[k]] += n.cross(m.tri_edge(t, (k + 1) % 3)) * 0.5;
        }
    }
    for &t in &kinked {
        let e = [m.tri_edge(t, 0), m.tri_edge(t, 1), m.tri_edge(t, 2)];
        let long = e.iter().copied().fold(Point3::ZERO, |a, b| if b.norm_sq() > a.norm_sq() { b } else { a });
        if long == Point3::ZERO {
            continue;
        }
        let dir = long.normalized();
        let tri = m.triangles[t];
        for k in 0..3 {
            let v = tri[k];
            let across = g[v] - dir * g[v].dot(dir);
            let len = across.norm();
            if len > 0.0 {
                let cut = len.min(0.5 * e[(k + 1) % 3].norm());
                g[v] -= across * (cut / len);
            }
        }
    }
    for (gv, &fixed) in g.iter_mut().zip(&m.boundary_fixed) {
        if fixed {
            *gv = Point3::ZERO;
        }
    }
    (g, kinked.len())
}

/// Area gradient per vertex; fixed vertices report zero and degenerate
/// triangles contribute nothing.
pub fn area_gradient(m: &TriSurfaceMesh) -> Vec<Point3> {
    area_gradient_with_stats(m).0
}

/// Largest per-vertex gradient norm.
pub fn max_norm(g: &[Point3]) -> f64 {
    g.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tent(height: f64) -> TriSurfaceMesh {
        let n = 6;
        let mut v = vec![Point3::new(0.0, 0.0, height)];
        for k in 0..n {
            let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            v.push(Point3::new(t.cos(), t.sin(), 0.0));
        }
        let tris = (0..n).map(|k| [0, 1 + k, 1 + (k + 1) % n]).collect();
        TriSurfaceMesh::new(v, tris).unwrap()
    }

    #[test]
    fn flat_fan_has_zero_gradient() {
        let g = area_gradient(&tent(0.0));
        assert!(g[0].norm() <= 1e-15);
        assert!(g[1..].iter().all(|v| *v == Point3::ZERO));
    }

    #[test]
    fn lifted_apex_is_pulled_down() {
        let g = area_gradient(&tent(0.3));
        // descent direction is -g
        assert!(g[0].z > 0.0);
        assert!(g[0].x.abs() < 1e-14 && g[0].y.abs() < 1e-14);
    }

    #[test]
    fn matches_finite_differences() {
        let mut m = tent(0.3);
        m.vertices[0] = Point3::new(0.1, -0.2, 0.3);
        let g = area_gradient(&m);
        let h = 1e-6;
        for c in 0..3 {
            let mut a = m.clone();
            let mut b = m.clone();
            a.vertices[0][c] += h;
            b.vertices[0][c] -= h;
            let fd = (a.area() - b.area()) / (2.0 * h);
            assert!((fd - g[0][c]).abs() < 1e-8, "{fd} vs {}", g[0][c]);
        }
    }
}
