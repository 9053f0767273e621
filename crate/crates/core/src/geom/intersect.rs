//! Self-intersection and surface-surface intersection, both lattice-aware on
//! flat tori.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::ambient::Ambient;
use super::bvh::Bvh;
use super::mesh::TriSurfaceMesh;
use super::tri::{tri_tri, Aabb, TriTri, GEOM_TOL};
use super::vec3::{Point3, ShiftVec};

/// An intersection curve. Points are in ambient coordinates (wrapped into the
/// fundamental domain on a torus).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntersectionCurve {
    pub points: Vec<Point3>,
    pub closed: bool,
}

fn lifted_tris(m: &TriSurfaceMesh) -> Vec<[Point3; 3]> {
    (0..m.triangle_count()).map(|t| m.tri_lifted(t)).collect()
}

/// Lattice translates worth testing between two boxes.
fn translates(amb: &Ambient, a: &Aabb, b: &Aabb) -> Vec<(ShiftVec, Point3)> {
    let periods = match amb.periods() {
        Some(p) => p,
        None => return vec![([0, 0, 0], Point3::ZERO)],
    };
    // shift b by k*periods so that it overlaps a
    let range = |i: usize| -> (i32, i32) {
        let l = periods[i];
        let lo = ((a.lo[i] - b.hi[i]) / l - 1e-12).ceil() as i32;
        let hi = ((a.hi[i] - b.lo[i]) / l + 1e-12).floor() as i32;
        (lo, hi)
    };
    let (x0, x1) = range(0);
    let (y0, y1) = range(1);
    let (z0, z1) = range(2);
    let mut out = Vec::new();
    for i in x0..=x1 {
        for j in y0..=y1 {
            for k in z0..=z1 {
                let s = [i, j, k];
                out.push((s, Point3::ZERO.shifted(s, periods)));
            }
        }
    }
    out
}

fn hull(boxes: &[Aabb]) -> Aabb {
    boxes.iter().fold(Aabb::empty(), |acc, b| acc.union(b))
}

/// All non-adjacent triangle pairs `(i, j)`, `i < j`, that intersect,
/// sorted. Triangles sharing a vertex index are adjacent.
pub fn self_intersections(m: &TriSurfaceMesh) -> Vec<(usize, usize)> {
    let tris = lifted_tris(m);
    let boxes: Vec<Aabb> = tris.iter().map(|t| Aabb::of(t).inflated(GEOM_TOL)).collect();
    let hull = hull(&boxes);
    let bvh = Bvh::build(boxes.clone());
    let mut out = BTreeSet::new();
    for (i, ti) in tris.iter().enumerate() {
        for (_, off) in translates(&m.ambient, &boxes[i], &hull) {
            // candidates j whose box, shifted by off, meets box i
            let q = boxes[i].translated(-off);
            bvh.for_each_overlap(&q, |j| {
                if j <= i {
                    return;
                }
                let (a, b) = (m.triangles[i], m.triangles[j]);
                if a.iter().any(|v| b.contains(v)) {
                    return;
                }
                let tj = tris[j].map(|p| p + off);
                if tri_tri(ti, &tj).intersects() {
                    out.insert((i, j));
                }
            });
        }
    }
    out.into_iter().collect()
}

/// Point clustering with tolerance, for chaining segment endpoints.
struct PointPool {
    cell: f64,
    tol: f64,
    grid: HashMap<(i64, i64, i64), Vec<usize>>,
    points: Vec<Point3>,
}

impl PointPool {
    fn new(tol: f64) -> Self {
        Self { cell: tol * 16.0, tol, grid: HashMap::new(), points: Vec::new() }
    }

    fn key(&self, p: Point3) -> (i64, i64, i64) {
        (
            (p.x / self.cell).floor() as i64,
            (p.y / self.cell).floor() as i64,
            (p.z / self.cell).floor() as i64,
        )
    }

    fn insert(&mut self, p: Point3) -> usize {
        let k = self.key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(ids) = self.grid.get(&(k.0 + dx, k.1 + dy, k.2 + dz)) {
                        for &id in ids {
                            if self.points[id].dist(p) <= self.tol {
                                return id;
                            }
                        }
                    }
                }
            }
        }
        let id = self.points.len();
        self.points.push(p);
        self.grid.entry(k).or_default().push(id);
        id
    }
}

fn canonical(amb: &Ambient, p: Point3) -> Point3 {
    let (w, _) = amb.wrap(p);
    match amb.periods() {
        Some(l) => {
            let fix = |c: f64, l: f64| if l - c <= GEOM_TOL { 0.0 } else { c };
            Point3::new(fix(w.x, l.x), fix(w.y, l.y), fix(w.z, l.z))
        }
        None => w,
    }
}

/// Intersection of two meshes in the same ambient, chained into curves.
pub fn surface_intersection(a: &TriSurfaceMesh, b: &TriSurfaceMesh) -> Vec<IntersectionCurve> {
    let amb = if a.ambient.is_torus() { a.ambient.clone() } else { b.ambient.clone() };
    let ta = lifted_tris(a);
    let tb = lifted_tris(b);
    let boxes_a: Vec<Aabb> = ta.iter().map(|t| Aabb::of(t).inflated(GEOM_TOL)).collect();
    let boxes_b: Vec<Aabb> = tb.iter().map(|t| Aabb::of(t).inflated(GEOM_TOL)).collect();
    let hull_b = hull(&boxes_b);
    let bvh = Bvh::build(boxes_b);
    let mut pool = PointPool::new(GEOM_TOL);
    let mut edges = BTreeSet::new();
    for (i, t) in ta.iter().enumerate() {
        for (_, off) in translates(&amb, &boxes_a[i], &hull_b) {
            let q = boxes_a[i].translated(-off);
            let mut hits = Vec::new();
            bvh.for_each_overlap(&q, |j| hits.push(j));
            hits.sort_unstable();
            for j in hits {
                let tj = tb[j].map(|p| p + off);
                if let TriTri::Segment(s, e) = tri_tri(t, &tj) {
                    let u = pool.insert(canonical(&amb, s));
                    let v = pool.insert(canonical(&amb, e));
                    if u != v {
                        edges.insert((u.min(v), u.max(v)));
                    }
                }
            }
        }
    }
    chain(&pool.points, &edges)
}

fn chain(points: &[Point3], edges: &BTreeSet<(usize, usize)>) -> Vec<IntersectionCurve> {
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(u, v) in edges {
        adj.entry(u).or_default().push(v);
        adj.entry(v).or_default().push(u);
    }
    for l in adj.values_mut() {
        l.sort_unstable();
    }
    let mut used: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut curves = Vec::new();
    let mut nodes: Vec<usize> = adj.keys().copied().collect();
    nodes.sort_unstable();
    // open chains first (start at odd-degree nodes), then cycles
    let starts: Vec<usize> = nodes
        .iter()
        .copied()
        .filter(|n| adj[n].len() % 2 == 1)
        .chain(nodes.iter().copied())
        .collect();
    for s in starts {
        loop {
            let next = adj[&s].iter().copied().find(|&w| !used.contains(&(s.min(w), s.max(w))));
            let Some(mut w) = next else { break };
            let mut path = vec![s];
            let mut prev = s;
            used.insert((s.min(w), s.max(w)));
            let closed;
            loop {
                if w == s {
                    closed = true;
                    break;
                }
                path.push(w);
                let nx = adj[&w]
                    .iter()
                    .copied()
                    .find(|&x| x != prev && !used.contains(&(w.min(x), w.max(x))))
                    .or_else(|| adj[&w].iter().copied().find(|&x| !used.contains(&(w.min(x), w.max(x)))));
                match nx {
                    Some(x) => {
                        used.insert((w.min(x), w.max(x)));
                        prev = w;
                        w = x;
                    }
                    None => {
                        closed = false;
                        break;
                    }
                }
            }
            curves.push(IntersectionCurve { points: path.iter().map(|&i| points[i]).collect(), closed });
        }
    }
    curves
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::mesh::TriSurfaceMesh;

    fn grid(n: usize, f: impl Fn(f64, f64) -> Point3) -> TriSurfaceMesh {
        let mut v = Vec::new();
        for j in 0..=n {
            for i in 0..=n {
                v.push(f(i as f64 / n as f64, j as f64 / n as f64));
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

    #[test]
    fn planar_grid_is_embedded() {
        let m = grid(8, |u, v| Point3::new(u, v, 0.0));
        assert!(self_intersections(&m).is_empty());
    }

    #[test]
    fn parallel_planes_do_not_meet() {
        let a = grid(5, |u, v| Point3::new(u, v, 0.0));
        let b = grid(5, |u, v| Point3::new(u, v, 0.3));
        assert!(surface_intersection(&a, &b).is_empty());
    }

    #[test]
    fn crossing_planes_meet_in_one_open_curve() {
        let a = grid(6, |u, v| Point3::new(u, v, 0.0));
        let b = grid(7, |u, v| Point3::new(u, 0.5, v - 0.5));
        let c = surface_intersection(&a, &b);
        assert_eq!(c.len(), 1);
        assert!(!c[0].closed);
        for p in &c[0].points {
            assert!(p.z.abs() < 1e-12 && (p.y - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn folded_sheet_self_intersects() {
        // two sheets of one mesh crossing each other
        let a = grid(4, |u, v| Point3::new(u, v, 0.0));
        let b = grid(4, |u, v| Point3::new(u, 0.5, v - 0.5));
        let m = a.disjoint_union(&b).unwrap();
        assert!(!self_intersections(&m).is_empty());
    }
}
