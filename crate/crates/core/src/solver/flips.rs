//! Intrinsic Delaunay edge flips that never increase area.

use std::collections::HashMap;
use std::f64::consts::PI;

use super::gradient::DEGENERATE_RATIO;
use crate::geom::{Point3, ShiftVec, TriSurfaceMesh};

fn angle(u: Point3, v: Point3) -> f64 {
    u.cross(v).norm().atan2(u.dot(v))
}

fn tri_area(p: [Point3; 3]) -> f64 {
    0.5 * (p[1] - p[0]).cross(p[2] - p[0]).norm()
}

fn healthy(p: [Point3; 3]) -> bool {
    let cross = 2.0 * tri_area(p);
    let longest = [p[1] - p[0], p[2] - p[1], p[0] - p[2]].iter().map(|e| e.norm_sq()).fold(0.0, f64::max);
    cross > DEGENERATE_RATIO * 1e3 * longest
}

/// Triangle corners rotated so that corner 0 is `tri[k]`.
fn rotated(m: &TriSurfaceMesh, t: usize, k: usize) -> ([usize; 3], [Point3; 3]) {
    let tri = m.triangles[t];
    let l = m.tri_lifted(t);
    ([tri[k], tri[(k + 1) % 3], tri[(k + 2) % 3]], [l[k], l[(k + 1) % 3], l[(k + 2) % 3]])
}

fn shifts_from_lifts(m: &TriSurfaceMesh, tri: [usize; 3], lifts: [Point3; 3]) -> Option<[ShiftVec; 3]> {
    let periods = m.periods()?;
    let k = |i: usize| -> [i64; 3] {
        let d = lifts[i] - m.vertices[tri[i]];
        [
            (d.x / periods.x).round() as i64,
            (d.y / periods.y).round() as i64,
            (d.z / periods.z).round() as i64,
        ]
    };
    let ks = [k(0), k(1), k(2)];
    Some([0, 1, 2].map(|i| {
        let (a, b) = (ks[i], ks[(i + 1) % 3]);
        [(b[0] - a[0]) as i32, (b[1] - a[1]) as i32, (b[2] - a[2]) as i32]
    }))
}

/// One pass over all interior edges. An edge is flipped when the two
/// opposite angles sum to more than pi, the new diagonal is not already an
/// edge, both new triangles are healthy and the area does not grow. Returns
/// the number of flips. Incoherently oriented meshes are left alone.
pub fn improve_pass(m: &mut TriSurfaceMesh) -> usize {
    if !m.is_coherently_oriented() {
        return 0;
    }
    let mut slot: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
    for (t, tri) in m.triangles.iter().enumerate() {
        for k in 0..3 {
            slot.insert((tri[k], tri[(k + 1) % 3]), (t, k));
        }
    }
    let mut flips = 0;
    for t in 0..m.triangle_count() {
        for k in 0..3 {
            let ([a, b, c], [la, lb, lc]) = rotated(m, t, k);
            let Some(&(t2, k2)) = slot.get(&(b, a)) else { continue };
            if t2 == t {
                continue;
            }
            let ([_, a2, d], [lb2, la2, ld2]) = rotated(m, t2, k2);
            debug_assert_eq!(a2, a);
            if c == d || slot.contains_key(&(c, d)) || slot.contains_key(&(d, c)) {
                continue;
            }
            // bring the second triangle into the first one's lift
            let off = lb - lb2;
            let ld = ld2 + off;
            if (la2 + off).dist(la) > 1e-9 * (1.0 + la.norm()) {
                continue;
            }
            if angle(la - lc, lb - lc) + angle(lb - ld, la - ld) <= PI + 1e-12 {
                continue;
            }
            let n1 = [lc, la, ld];
            let n2 = [ld, lb, lc];
            if !healthy(n1) || !healthy(n2) {
                continue;
            }
            let old = tri_area([la, lb, lc]) + tri_area([lb, la, ld]);
            if tri_area(n1) + tri_area(n2) > old {
                continue;
            }
            for tri in [m.triangles[t], m.triangles[t2]] {
                for j in 0..3 {
                    slot.remove(&(tri[j], tri[(j + 1) % 3]));
                }
            }
            m.triangles[t] = [c, a, d];
            m.triangles[t2] = [d, b, c];
            let s1 = shifts_from_lifts(m, [c, a, d], n1);
            let s2 = shifts_from_lifts(m, [d, b, c], n2);
            if let (Some(sh), Some(s1), Some(s2)) = (m.tri_shifts.as_mut(), s1, s2) {
                sh[t] = s1;
                sh[t2] = s2;
            }
            for tt in [t, t2] {
                let tri = m.triangles[tt];
                for j in 0..3 {
                    slot.insert((tri[j], tri[(j + 1) % 3]), (tt, j));
                }
            }
            flips += 1;
            break;
        }
    }
    flips
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flips_a_bad_diagonal_in_a_planar_quad() {
        // long diagonal 0-2 across a thin rhombus
        let v = vec![
            Point3::new(-1.0, 0.0, 0.0),
            Point3::new(0.0, -0.2, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 0.2, 0.0),
        ];
        let mut m = TriSurfaceMesh::new(v, vec![[0, 1, 2], [0, 2, 3]]).unwrap();
        let (a0, chi) = (m.area(), m.euler_characteristic());
        let bnd = m.boundary_edges().len();
        assert_eq!(improve_pass(&mut m), 1);
        assert!((m.area() - a0).abs() < 1e-15);
        assert_eq!(m.euler_characteristic(), chi);
        assert_eq!(m.boundary_edges().len(), bnd);
        assert!(m.is_coherently_oriented());
        let has = |a: usize, b: usize| m.triangles.iter().any(|t| t.contains(&a) && t.contains(&b));
        assert!(has(1, 3));
        assert_eq!(improve_pass(&mut m), 0);
    }
}
