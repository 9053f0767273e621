use super::bvh::Bvh;
use super::mesh::TriSurfaceMesh;
use super::tri::{point_triangle_distance, Aabb};
use super::vec3::Point3;

/// Barycentric samples of every triangle such that each surface point lies
/// within `spacing` of a sample.
pub fn sample_points(m: &TriSurfaceMesh, spacing: f64) -> Vec<Point3> {
    let mut out = Vec::new();
    for t in 0..m.triangle_count() {
        let [a, b, c] = m.tri_lifted(t);
        let longest = a.dist(b).max(b.dist(c)).max(c.dist(a));
        let k = (longest / spacing).ceil().max(1.0) as usize;
        for i in 0..=k {
            for j in 0..=(k - i) {
                let u = i as f64 / k as f64;
                let v = j as f64 / k as f64;
                out.push(a + (b - a) * u + (c - a) * v);
            }
        }
    }
    out
}

/// Largest distance from a sample of `a` to the surface of `b`.
pub fn one_sided_distance(a: &TriSurfaceMesh, b: &TriSurfaceMesh, sample_h: f64) -> f64 {
    let tris: Vec<[Point3; 3]> = (0..b.triangle_count()).map(|t| b.tri_lifted(t)).collect();
    let bvh = Bvh::build(tris.iter().map(|t| Aabb::of(t)).collect());
    sample_points(a, sample_h)
        .into_iter()
        .map(|p| bvh.nearest(p, |i| point_triangle_distance(p, &tris[i])).map_or(f64::INFINITY, |r| r.0))
        .fold(0.0, f64::max)
}

/// Symmetric Hausdorff distance estimated from samples at spacing
/// `sample_h`; the estimate is within `sample_h` of the exact value.
pub fn hausdorff_distance(a: &TriSurfaceMesh, b: &TriSurfaceMesh, sample_h: f64) -> f64 {
    one_sided_distance(a, b, sample_h).max(one_sided_distance(b, a, sample_h))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square(z: f64) -> TriSurfaceMesh {
        TriSurfaceMesh::new(
            vec![
                Point3::new(0.0, 0.0, z),
                Point3::new(1.0, 0.0, z),
                Point3::new(1.0, 1.0, z),
                Point3::new(0.0, 1.0, z),
            ],
            vec![[0, 1, 2], [0, 2, 3]],
        )
        .unwrap()
    }

    #[test]
    fn identical_is_zero() {
        let a = unit_square(0.0);
        assert!(hausdorff_distance(&a, &a, 0.1) < 1e-15);
    }

    #[test]
    fn lifted_square() {
        let d = hausdorff_distance(&unit_square(0.0), &unit_square(0.3), 0.05);
        assert!((d - 0.3).abs() <= 0.05);
    }

    #[test]
    fn sampling_covers_triangle() {
        let a = unit_square(0.0);
        let s = sample_points(&a, 0.1);
        // a point in the middle of a cell is within spacing of a sample
        let q = Point3::new(0.437, 0.291, 0.0);
        let d = s.iter().map(|p| p.dist(q)).fold(f64::INFINITY, f64::min);
        assert!(d <= 0.1);
    }
}
