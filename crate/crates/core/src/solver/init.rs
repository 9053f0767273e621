//! Starting meshes for the solver.

use crate::constructions::build::{segments, MeshBuilder};
use crate::error::{Error, Result};
use crate::geom::{boundary_multiplicity, ClosedPolyline, Point3, TriSurfaceMesh};

/// Points at `count` equal arclength fractions along a closed polyline.
fn sample_ring(pts: &[Point3], count: usize) -> Vec<Point3> {
    let n = pts.len();
    let mut acc = vec![0.0];
    for i in 0..n {
        acc.push(acc[i] + pts[(i + 1) % n].dist(pts[i]));
    }
    let total = acc[n];
    let mut out = Vec::with_capacity(count);
    let mut seg = 0;
    for j in 0..count {
        let s = total * j as f64 / count as f64;
        while seg + 1 < n && acc[seg + 1] <= s {
            seg += 1;
        }
        let l = acc[seg + 1] - acc[seg];
        let f = if l > 0.0 { (s - acc[seg]) / l } else { 0.0 };
        out.push(pts[seg].lerp(pts[(seg + 1) % n], f));
    }
    out
}

/// Disk spanning `boundary` (resampled to `target_edge`) made of rings
/// shrinking linearly towards `apex`.
pub fn cone_disk(boundary: &ClosedPolyline, apex: Point3, target_edge: f64) -> Result<TriSurfaceMesh> {
    if boundary.periods().is_some() {
        return Err(Error::InvalidParams("disk initialisation works in Euclidean space only".into()));
    }
    let b = boundary.resampled(target_edge)?;
    let pts = b.vertices();
    let diameter = pts.iter().flat_map(|p| pts.iter().map(move |q| p.dist(*q))).fold(0.0, f64::max);
    if !(diameter > 1e-12) {
        return Err(Error::DegenerateBoundary(format!("boundary diameter {diameter:.3e}")));
    }
    let reach = pts.iter().map(|p| p.dist(apex)).fold(0.0, f64::max);
    let rings = segments(reach, target_edge);
    let n = pts.len();
    let mut mb = MeshBuilder::new();
    let mut prev = mb.add_row(pts.iter().copied());
    for k in 1..rings {
        let s = 1.0 - k as f64 / rings as f64;
        let count = ((n as f64 * s).round() as usize).max(3);
        let ring = sample_ring(pts, count);
        let row = mb.add_row(ring.into_iter().map(|p| apex + (p - apex) * s));
        mb.zip_closed(&prev, &row);
        prev = row;
    }
    let centre = mb.add(apex);
    for i in 0..prev.len() {
        mb.tri(prev[i], prev[(i + 1) % prev.len()], centre);
    }
    let m = mb.finish()?;
    Ok(match boundary_multiplicity(&m, &b, 1e-9) {
        Ok(k) if k < 0 => m.flipped(),
        _ => m,
    })
}

/// Disk spanning `boundary`: a cone to the vertex centroid followed by
/// uniform Laplacian smoothing of the interior.
pub fn triangulate_disk(boundary: &ClosedPolyline, target_edge: f64) -> Result<TriSurfaceMesh> {
    let pts = boundary.vertices();
    let centroid = pts.iter().fold(Point3::ZERO, |a, p| a + *p) * (1.0 / pts.len().max(1) as f64);
    let mut m = cone_disk(boundary, centroid, target_edge)?;
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); m.vertex_count()];
    for t in &m.triangles {
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            nbrs[a].push(b);
            nbrs[b].push(a);
        }
    }
    for l in &mut nbrs {
        l.sort_unstable();
        l.dedup();
    }
    for _ in 0..20 {
        let old = m.vertices.clone();
        for v in 0..m.vertex_count() {
            if m.boundary_fixed[v] || nbrs[v].is_empty() {
                continue;
            }
            let avg = nbrs[v].iter().fold(Point3::ZERO, |a, &w| a + old[w]) * (1.0 / nbrs[v].len() as f64);
            m.vertices[v] = old[v].lerp(avg, 0.5);
        }
    }
    Ok(m)
}
