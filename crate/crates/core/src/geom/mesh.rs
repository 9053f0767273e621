//! Indexed triangle surface meshes, Euclidean or on a flat torus.
//!
//! On a torus, vertex positions live in the fundamental domain and every
//! triangle stores the lattice shift of each of its three directed edges:
//! `shifts[t][k]` belongs to the edge from corner `k` to corner `k + 1`.
//! The edge vector is then `pos(w) + shift * periods - pos(v)`.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::ambient::Ambient;
use super::polyline::ClosedPolyline;
use super::vec3::{shift_add, shift_neg, Point3, ShiftVec, ZERO_SHIFT};
use crate::error::{Error, Result};

pub type Tri = [usize; 3];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriSurfaceMesh {
    pub vertices: Vec<Point3>,
    pub triangles: Vec<Tri>,
    pub boundary_fixed: Vec<bool>,
    #[serde(default)]
    pub tri_shifts: Option<Vec<[ShiftVec; 3]>>,
    pub ambient: Ambient,
}

/// Location of a directed edge inside the triangle list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeSlot {
    pub tri: usize,
    pub corner: usize,
}

impl TriSurfaceMesh {
    /// Euclidean mesh; boundary vertices are marked fixed.
    pub fn new(vertices: Vec<Point3>, triangles: Vec<Tri>) -> Result<Self> {
        Self::with_ambient(vertices, triangles, None, Ambient::Euclidean3)
    }

    pub fn with_ambient(
        vertices: Vec<Point3>,
        triangles: Vec<Tri>,
        tri_shifts: Option<Vec<[ShiftVec; 3]>>,
        ambient: Ambient,
    ) -> Result<Self> {
        let n = vertices.len();
        let mut m = Self {
            vertices,
            triangles,
            boundary_fixed: vec![false; n],
            tri_shifts,
            ambient,
        };
        m.validate()?;
        m.mark_boundary_fixed();
        Ok(m)
    }

    /// Builds a torus mesh from per-triangle lifted corner coordinates. Each
    /// vertex gets the wrapped position of its first lift; edge shifts are
    /// recovered from the lifts.
    pub fn from_lifted_corners(
        vertex_count: usize,
        triangles: Vec<Tri>,
        corner_lifts: &[[Point3; 3]],
        ambient: Ambient,
    ) -> Result<Self> {
        let periods = ambient
            .periods()
            .ok_or_else(|| Error::InvalidMesh("lifted construction needs a torus ambient".into()))?;
        let mut pos: Vec<Option<Point3>> = vec![None; vertex_count];
        for (t, lifts) in triangles.iter().zip(corner_lifts) {
            for k in 0..3 {
                let v = t[k];
                if v >= vertex_count {
                    return Err(Error::InvalidMesh(format!("vertex index {v} out of range")));
                }
                if pos[v].is_none() {
                    pos[v] = Some(ambient.wrap(lifts[k]).0);
                }
            }
        }
        let vertices: Vec<Point3> = pos
            .into_iter()
            .enumerate()
            .map(|(i, p)| p.ok_or_else(|| Error::InvalidMesh(format!("vertex {i} unused"))))
            .collect::<Result<_>>()?;
        let lattice = |v: usize, lift: Point3| -> ShiftVec {
            let d = lift - vertices[v];
            [
                (d.x / periods.x).round() as i32,
                (d.y / periods.y).round() as i32,
                (d.z / periods.z).round() as i32,
            ]
        };
        let shifts = triangles
            .iter()
            .zip(corner_lifts)
            .map(|(t, lifts)| {
                let k: [ShiftVec; 3] = [0, 1, 2].map(|i| lattice(t[i], lifts[i]));
                [0, 1, 2].map(|i| {
                    let a = k[i];
                    let b = k[(i + 1) % 3];
                    [b[0] - a[0], b[1] - a[1], b[2] - a[2]]
                })
            })
            .collect();
        Self::with_ambient(vertices, triangles, Some(shifts), ambient)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn periods(&self) -> Option<Point3> {
        self.ambient.periods()
    }

    fn shift(&self, t: usize, k: usize) -> ShiftVec {
        match &self.tri_shifts {
            Some(s) => s[t][k],
            None => ZERO_SHIFT,
        }
    }

    /// Checks index validity, edge manifoldness and the shift invariants.
    /// Orientation coherence is reported by [`is_coherently_oriented`](Self::is_coherently_oriented)
    /// rather than enforced here, so flipped or non-orientable meshes can be represented.
    pub fn validate(&self) -> Result<()> {
        let n = self.vertices.len();
        if self.boundary_fixed.len() != n {
            return Err(Error::InvalidMesh("boundary_fixed length mismatch".into()));
        }
        if let Some(i) = self.vertices.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidMesh(format!("vertex {i} is not finite")));
        }
        for (ti, t) in self.triangles.iter().enumerate() {
            if t.iter().any(|&v| v >= n) {
                return Err(Error::InvalidMesh(format!("triangle {ti} has an index out of range")));
            }
            if t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                return Err(Error::InvalidMesh(format!("triangle {ti} repeats a vertex")));
            }
        }
        match (&self.tri_shifts, &self.ambient) {
            (Some(_), Ambient::Euclidean3) => {
                return Err(Error::InvalidMesh("edge shifts given for a Euclidean mesh".into()))
            }
            (Some(s), _) if s.len() != self.triangles.len() => {
                return Err(Error::InvalidMesh("one shift triple per triangle required".into()))
            }
            _ => {}
        }
        let mut edges: HashMap<(usize, usize), Vec<(usize, ShiftVec)>> = HashMap::new();
        for (ti, t) in self.triangles.iter().enumerate() {
            let mut sum = ZERO_SHIFT;
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                let s = self.shift(ti, k);
                sum = shift_add(sum, s);
                let (key, s_canon) = if a < b { ((a, b), s) } else { ((b, a), shift_neg(s)) };
                edges.entry(key).or_default().push((ti, s_canon));
            }
            if sum != ZERO_SHIFT {
                return Err(Error::InvalidMesh(format!("shift sum around triangle {ti} is {sum:?}")));
            }
        }
        for (e, uses) in &edges {
            if uses.len() > 2 {
                return Err(Error::InvalidMesh(format!(
                    "edge {e:?} is shared by {} triangles",
                    uses.len()
                )));
            }
            if uses.len() == 2 && uses[0].1 != uses[1].1 {
                return Err(Error::InvalidMesh(format!("edge {e:?} has inconsistent shifts")));
            }
        }
        Ok(())
    }

    /// Map from each directed edge to its slot.
    pub fn directed_edges(&self) -> HashMap<(usize, usize), EdgeSlot> {
        let mut map = HashMap::with_capacity(self.triangles.len() * 3);
        for (ti, t) in self.triangles.iter().enumerate() {
            for k in 0..3 {
                map.insert((t[k], t[(k + 1) % 3]), EdgeSlot { tri: ti, corner: k });
            }
        }
        map
    }

    /// Shift-aware vector of corner edge `k -> k+1` of triangle `t`.
    pub fn tri_edge(&self, t: usize, k: usize) -> Point3 {
        let tri = self.triangles[t];
        let a = self.vertices[tri[k]];
        let b = self.vertices[tri[(k + 1) % 3]];
        match self.periods() {
            Some(p) => b.shifted(self.shift(t, k), p) - a,
            None => b - a,
        }
    }

    /// Corners of triangle `t` in a common lift anchored at corner 0.
    pub fn tri_lifted(&self, t: usize) -> [Point3; 3] {
        let p0 = self.vertices[self.triangles[t][0]];
        let p1 = p0 + self.tri_edge(t, 0);
        let p2 = p1 + self.tri_edge(t, 1);
        [p0, p1, p2]
    }

    pub fn edge_vector(&self, v: usize, w: usize) -> Result<Point3> {
        for (ti, t) in self.triangles.iter().enumerate() {
            for k in 0..3 {
                if t[k] == v && t[(k + 1) % 3] == w {
                    return Ok(self.tri_edge(ti, k));
                }
                if t[k] == w && t[(k + 1) % 3] == v {
                    return Ok(-self.tri_edge(ti, k));
                }
            }
        }
        Err(Error::NotAnEdge(v, w))
    }

    /// Area-weighted normal: `e0 x e2'` with magnitude twice the area.
    pub fn tri_cross(&self, t: usize) -> Point3 {
        let e1 = self.tri_edge(t, 0);
        let e2 = -self.tri_edge(t, 2);
        e1.cross(e2)
    }

    pub fn tri_area(&self, t: usize) -> f64 {
        0.5 * self.tri_cross(t).norm()
    }

    pub fn area(&self) -> f64 {
        (0..self.triangles.len()).map(|t| self.tri_area(t)).sum()
    }

    /// Boundary edges, as they appear in their single triangle.
    pub fn boundary_edges(&self) -> Vec<EdgeSlot> {
        let pairs: std::collections::HashSet<(usize, usize)> =
            self.undirected_boundary_pairs().into_iter().collect();
        let mut out = Vec::new();
        for (ti, t) in self.triangles.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                if pairs.contains(&(a.min(b), a.max(b))) {
                    out.push(EdgeSlot { tri: ti, corner: k });
                }
            }
        }
        out
    }

    pub fn boundary_vertices(&self) -> Vec<bool> {
        let mut flags = vec![false; self.vertices.len()];
        for (a, b) in self.undirected_boundary_pairs() {
            flags[a] = true;
            flags[b] = true;
        }
        flags
    }

    fn undirected_boundary_pairs(&self) -> Vec<(usize, usize)> {
        let mut count: HashMap<(usize, usize), usize> = HashMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                *count.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        let mut v: Vec<_> = count.into_iter().filter(|(_, c)| *c == 1).map(|(e, _)| e).collect();
        v.sort_unstable();
        v
    }

    pub fn mark_boundary_fixed(&mut self) {
        self.boundary_fixed = self.boundary_vertices();
    }

    /// Boundary cycles as vertex index lists, oriented as induced by the
    /// triangles, with the shift of each step.
    pub fn boundary_cycles(&self) -> Vec<(Vec<usize>, Vec<ShiftVec>)> {
        let pairs: std::collections::HashSet<(usize, usize)> =
            self.undirected_boundary_pairs().into_iter().collect();
        let mut outgoing: BTreeMap<usize, Vec<(usize, ShiftVec)>> = BTreeMap::new();
        for (ti, t) in self.triangles.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                if pairs.contains(&(a.min(b), a.max(b))) {
                    outgoing.entry(a).or_default().push((b, self.shift(ti, k)));
                }
            }
        }
        let mut cycles = Vec::new();
        loop {
            let start = match outgoing.iter().find(|(_, v)| !v.is_empty()) {
                Some((&s, _)) => s,
                None => break,
            };
            let mut verts = vec![start];
            let mut shifts = Vec::new();
            let mut cur = start;
            loop {
                let list = outgoing.get_mut(&cur).unwrap();
                let (next, s) = list.remove(0);
                shifts.push(s);
                if next == start {
                    break;
                }
                verts.push(next);
                cur = next;
                if outgoing.get(&cur).map_or(true, |l| l.is_empty()) {
                    // open chain: can only happen with incoherent orientation
                    break;
                }
            }
            cycles.push((verts, shifts));
        }
        cycles
    }

    /// Oriented boundary loops. Loops shorter than 3 vertices (which only
    /// arise from incoherent meshes) are skipped.
    pub fn boundary_loops(&self) -> Vec<ClosedPolyline> {
        self.boundary_cycles()
            .into_iter()
            .filter(|(v, s)| v.len() >= 3 && v.len() == s.len())
            .filter_map(|(v, s)| {
                ClosedPolyline::with_shifts(
                    v.iter().map(|&i| self.vertices[i]).collect(),
                    s,
                    self.periods(),
                )
                .ok()
            })
            .collect()
    }

    pub fn is_coherently_oriented(&self) -> bool {
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                let e = (t[k], t[(k + 1) % 3]);
                let c = seen.entry(e).or_default();
                *c += 1;
                if *c > 1 {
                    return false;
                }
            }
        }
        true
    }

    pub fn edge_count(&self) -> usize {
        let mut set = std::collections::HashSet::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                set.insert((a.min(b), a.max(b)));
            }
        }
        set.len()
    }

    /// `V - E + F` over referenced vertices.
    pub fn euler_characteristic(&self) -> i64 {
        let mut used = vec![false; self.vertices.len()];
        for t in &self.triangles {
            for &v in t {
                used[v] = true;
            }
        }
        let v = used.iter().filter(|u| **u).count() as i64;
        v - self.edge_count() as i64 + self.triangles.len() as i64
    }

    /// Reverses every triangle.
    pub fn flipped(&self) -> Self {
        let mut m = self.clone();
        for t in &mut m.triangles {
            t.swap(1, 2);
        }
        if let Some(s) = &mut m.tri_shifts {
            for sh in s.iter_mut() {
                *sh = [shift_neg(sh[2]), shift_neg(sh[1]), shift_neg(sh[0])];
            }
        }
        m
    }

    /// Number of edge-connected triangle components.
    pub fn component_count(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.triangles.len()).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        let mut owner: HashMap<(usize, usize), usize> = HashMap::new();
        for (ti, t) in self.triangles.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                if let Some(&tj) = owner.get(&(a.min(b), a.max(b))) {
                    let (ra, rb) = (find(&mut parent, ti), find(&mut parent, tj));
                    parent[ra] = rb;
                } else {
                    owner.insert((a.min(b), a.max(b)), ti);
                }
            }
        }
        let mut roots = std::collections::HashSet::new();
        for i in 0..self.triangles.len() {
            roots.insert(find(&mut parent, i));
        }
        roots.len()
    }

    /// Disjoint union; `other` is re-indexed after `self`. Both must share
    /// the ambient (a Euclidean mesh may join a torus mesh if it lies in the
    /// fundamental domain).
    pub fn disjoint_union(&self, other: &TriSurfaceMesh) -> Result<Self> {
        let ambient = match (&self.ambient, &other.ambient) {
            (a, b) if a == b => a.clone(),
            (a @ Ambient::FlatTorus3 { .. }, Ambient::Euclidean3) => a.clone(),
            (Ambient::Euclidean3, b @ Ambient::FlatTorus3 { .. }) => b.clone(),
            _ => return Err(Error::InvalidMesh("ambient mismatch in union".into())),
        };
        let off = self.vertices.len();
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices);
        let mut triangles = self.triangles.clone();
        triangles.extend(other.triangles.iter().map(|t| t.map(|v| v + off)));
        let tri_shifts = if ambient.is_torus() {
            let mut s = self.tri_shifts.clone().unwrap_or_else(|| vec![[ZERO_SHIFT; 3]; self.triangles.len()]);
            s.extend(other.tri_shifts.clone().unwrap_or_else(|| vec![[ZERO_SHIFT; 3]; other.triangles.len()]));
            Some(s)
        } else {
            None
        };
        let mut boundary_fixed = self.boundary_fixed.clone();
        boundary_fixed.extend_from_slice(&other.boundary_fixed);
        let m = Self { vertices, triangles, boundary_fixed, tri_shifts, ambient };
        m.validate()?;
        Ok(m)
    }

    /// Drops the listed triangles and any vertices left unreferenced.
    pub fn without_triangles(&self, drop: &[bool]) -> Result<Self> {
        let mut keep_v = vec![false; self.vertices.len()];
        let mut tris = Vec::new();
        let mut shifts = Vec::new();
        for (ti, t) in self.triangles.iter().enumerate() {
            if drop[ti] {
                continue;
            }
            for &v in t {
                keep_v[v] = true;
            }
            tris.push(*t);
            if let Some(s) = &self.tri_shifts {
                shifts.push(s[ti]);
            }
        }
        let mut remap = vec![usize::MAX; self.vertices.len()];
        let mut vertices = Vec::new();
        let mut fixed = Vec::new();
        for (i, k) in keep_v.iter().enumerate() {
            if *k {
                remap[i] = vertices.len();
                vertices.push(self.vertices[i]);
                fixed.push(self.boundary_fixed[i]);
            }
        }
        let triangles = tris.into_iter().map(|t| t.map(|v| remap[v])).collect();
        let m = Self {
            vertices,
            triangles,
            boundary_fixed: fixed,
            tri_shifts: self.tri_shifts.as_ref().map(|_| shifts),
            ambient: self.ambient.clone(),
        };
        m.validate()?;
        Ok(m)
    }

    /// Applies `f` to every vertex (Euclidean meshes only).
    pub fn map_vertices(&self, f: impl Fn(Point3) -> Point3) -> Self {
        let mut m = self.clone();
        for p in &mut m.vertices {
            *p = f(*p);
        }
        m
    }

    /// Axis-aligned bounds of all vertices.
    pub fn bounds(&self) -> (Point3, Point3) {
        let mut lo = Point3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
        let mut hi = -lo;
        for p in &self.vertices {
            lo = Point3::new(lo.x.min(p.x), lo.y.min(p.y), lo.z.min(p.z));
            hi = Point3::new(hi.x.max(p.x), hi.y.max(p.y), hi.z.max(p.z));
        }
        (lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn grid_square(n: usize, half: f64) -> TriSurfaceMesh {
        let mut v = Vec::new();
        for j in 0..=n {
            for i in 0..=n {
                let x = -half + 2.0 * half * i as f64 / n as f64;
                let y = -half + 2.0 * half * j as f64 / n as f64;
                v.push(Point3::new(x, y, 0.0));
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
    fn unit_right_triangle_area() {
        let m = TriSurfaceMesh::new(
            vec![Point3::new(0.0, 0.0, 0.0), Point3::new(1.0, 0.0, 0.0), Point3::new(0.0, 1.0, 0.0)],
            vec![[0, 1, 2]],
        )
        .unwrap();
        assert_eq!(m.area(), 0.5);
    }

    #[test]
    fn grid_of_tau_has_area_four() {
        let m = grid_square(20, 1.0);
        assert!((m.area() - 4.0).abs() < 1e-12);
        let loops = m.boundary_loops();
        assert_eq!(loops.len(), 1);
        assert!((loops[0].length() - 8.0).abs() < 1e-12);
        assert_eq!(m.euler_characteristic(), 1);
    }

    #[test]
    fn euclidean_edge_vector_and_reversal() {
        let m = TriSurfaceMesh::new(
            vec![Point3::new(0.0, 0.0, 0.0), Point3::new(1.0, 0.0, 0.0), Point3::new(0.0, 1.0, 0.0)],
            vec![[0, 1, 2]],
        )
        .unwrap();
        assert_eq!(m.edge_vector(0, 1).unwrap(), Point3::new(1.0, 0.0, 0.0));
        assert_eq!(m.edge_vector(1, 0).unwrap(), Point3::new(-1.0, 0.0, 0.0));
        assert!(matches!(m.edge_vector(0, 0), Err(Error::NotAnEdge(0, 0))));
    }

    #[test]
    fn torus_edge_vector_wraps() {
        let amb = Ambient::torus(Point3::new(1.0, 1.0, 1.0), None).unwrap();
        let lifts = [[
            Point3::new(0.9, 0.0, 0.0),
            Point3::new(1.1, 0.0, 0.0),
            Point3::new(1.0, 0.1, 0.0),
        ]];
        let m = TriSurfaceMesh::from_lifted_corners(3, vec![[0, 1, 2]], &lifts, amb).unwrap();
        assert!((m.vertices[1].x - 0.1).abs() < 1e-12);
        let e = m.edge_vector(0, 1).unwrap();
        assert!((e.x - 0.2).abs() < 1e-12 && e.y.abs() < 1e-12);
        let r = m.edge_vector(1, 0).unwrap();
        assert!((r.x + 0.2).abs() < 1e-12);
    }

    #[test]
    fn flipped_triangle_breaks_coherence() {
        let mut m = grid_square(4, 1.0);
        assert!(m.is_coherently_oriented());
        m.triangles[5].swap(1, 2);
        assert!(!m.is_coherently_oriented());
    }

    #[test]
    fn annulus_has_two_loops() {
        // 8-sided ring between radius 1 and 2
        let n = 8;
        let mut v = Vec::new();
        for r in [1.0, 2.0] {
            for k in 0..n {
                let a = std::f64::consts::TAU * k as f64 / n as f64;
                v.push(Point3::new(r * a.cos(), r * a.sin(), 0.0));
            }
        }
        let mut t = Vec::new();
        for k in 0..n {
            let k1 = (k + 1) % n;
            t.push([k, n + k, n + k1]);
            t.push([k, n + k1, k1]);
        }
        let m = TriSurfaceMesh::new(v, t).unwrap();
        assert_eq!(m.boundary_loops().len(), 2);
        assert_eq!(m.euler_characteristic(), 0);
    }

    #[test]
    fn non_manifold_edge_rejected() {
        let v = vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(0.0, -1.0, 0.0),
            Point3::new(0.0, 0.0, 1.0),
        ];
        let r = TriSurfaceMesh::new(v, vec![[0, 1, 2], [1, 0, 3], [0, 1, 4]]);
        assert!(r.is_err());
    }
}
