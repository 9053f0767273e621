use super::mesh::TriSurfaceMesh;
use super::polyline::ClosedPolyline;
use crate::error::{Error, Result};

/// Winding degree of `loop_` over `target`: the net number of times its
/// projection runs around the target in the target's direction.
pub fn loop_degree(loop_: &ClosedPolyline, target: &ClosedPolyline) -> f64 {
    let total = target.length();
    let params: Vec<f64> = loop_.vertices().iter().map(|p| target.project(*p).1).collect();
    let n = params.len();
    let mut sum = 0.0;
    for i in 0..n {
        let mut ds = params[(i + 1) % n] - params[i];
        if ds > total / 2.0 {
            ds -= total;
        } else if ds < -total / 2.0 {
            ds += total;
        }
        sum += ds;
    }
    sum / total
}

/// Signed number of times the boundary of `m` covers `target`.
pub fn boundary_multiplicity(m: &TriSurfaceMesh, target: &ClosedPolyline, tol: f64) -> Result<i64> {
    let mut degree = 0.0;
    for (i, l) in m.boundary_loops().iter().enumerate() {
        let distance = l
            .vertices()
            .iter()
            .map(|p| target.distance_to(*p))
            .fold(0.0, f64::max);
        if distance > tol {
            return Err(Error::LoopOffTarget { loop_index: i, distance, tol });
        }
        degree += loop_degree(l, target);
    }
    Ok(degree.round() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::vec3::Point3;

    fn square_disk(n: usize) -> TriSurfaceMesh {
        let mut v = Vec::new();
        for j in 0..=n {
            for i in 0..=n {
                v.push(Point3::new(-1.0 + 2.0 * i as f64 / n as f64, -1.0 + 2.0 * j as f64 / n as f64, 0.0));
            }
        }
        let id = |i: usize, j: usize| j * (n + 1) + i;
        let mut t = Vec::new();
        for j in 0..n {
            for i in 0..n {
                t.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
                t.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
            }
        }
        TriSurfaceMesh::new(v, t).unwrap()
    }

    fn tau() -> ClosedPolyline {
        ClosedPolyline::new(vec![
            Point3::new(-1.0, -1.0, 0.0),
            Point3::new(1.0, -1.0, 0.0),
            Point3::new(1.0, 1.0, 0.0),
            Point3::new(-1.0, 1.0, 0.0),
        ])
        .unwrap()
    }

    #[test]
    fn single_positive_copy() {
        let m = square_disk(6);
        assert_eq!(boundary_multiplicity(&m, &tau(), 1e-9).unwrap(), 1);
        assert_eq!(boundary_multiplicity(&m, &tau().reversed(), 1e-9).unwrap(), -1);
        assert_eq!(boundary_multiplicity(&m.flipped(), &tau(), 1e-9).unwrap(), -1);
    }

    #[test]
    fn far_loop_is_named() {
        let m = square_disk(4).map_vertices(|p| p * 2.0);
        match boundary_multiplicity(&m, &tau(), 1e-6) {
            Err(Error::LoopOffTarget { loop_index: 0, .. }) => {}
            other => panic!("{other:?}"),
        }
    }
}
