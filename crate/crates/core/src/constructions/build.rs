//! Small mesh assembly toolkit shared by the builders: vertex rows, row
//! zipping, vertex identification and orientation repair.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::geom::{Ambient, Point3, Tri, TriSurfaceMesh};

/// Accumulates vertices (lifted coordinates) and triangles.
#[derive(Debug, Default, Clone)]
pub struct MeshBuilder {
    pub points: Vec<Point3>,
    pub tris: Vec<Tri>,
    // identified vertex pairs (same point of a torus, different lifts)
    links: Vec<(usize, usize)>,
}

fn fractions(pts: &[Point3], closed: bool) -> Vec<f64> {
    let mut acc = vec![0.0];
    let n = pts.len();
    for i in 1..n {
        acc.push(acc[i - 1] + pts[i].dist(pts[i - 1]));
    }
    let total = if closed { acc[n - 1] + pts[0].dist(pts[n - 1]) } else { acc[n - 1] };
    if total > 0.0 {
        acc.iter().map(|a| a / total).collect()
    } else {
        (0..n).map(|i| i as f64 / (n.max(2) - 1) as f64).collect()
    }
}

impl MeshBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, p: Point3) -> usize {
        self.points.push(p);
        self.points.len() - 1
    }

    pub fn add_row(&mut self, pts: impl IntoIterator<Item = Point3>) -> Vec<usize> {
        pts.into_iter().map(|p| self.add(p)).collect()
    }

    pub fn tri(&mut self, a: usize, b: usize, c: usize) {
        if a != b && b != c && a != c {
            self.tris.push([a, b, c]);
        }
    }

    /// Marks two builder vertices as the same mesh vertex (their positions
    /// may differ by a lattice vector).
    pub fn identify(&mut self, a: usize, b: usize) {
        if a != b {
            self.links.push((a, b));
        }
    }

    /// Triangulates the band between two open rows, pairing nodes by
    /// arclength fraction.
    pub fn zip(&mut self, lower: &[usize], upper: &[usize]) {
        let fl = fractions(&lower.iter().map(|&i| self.points[i]).collect::<Vec<_>>(), false);
        let fu = fractions(&upper.iter().map(|&i| self.points[i]).collect::<Vec<_>>(), false);
        let (n, m) = (lower.len(), upper.len());
        let (mut i, mut j) = (0, 0);
        while i + 1 < n || j + 1 < m {
            let advance_lower = if i + 1 >= n {
                false
            } else if j + 1 >= m {
                true
            } else {
                fl[i + 1] <= fu[j + 1]
            };
            if advance_lower {
                self.tri(lower[i], lower[i + 1], upper[j]);
                i += 1;
            } else {
                self.tri(lower[i], upper[j + 1], upper[j]);
                j += 1;
            }
        }
    }

    /// Like [`zip`](Self::zip) for closed rows; `upper` is rotated so its
    /// start is the node nearest to `lower[0]`.
    pub fn zip_closed(&mut self, lower: &[usize], upper: &[usize]) {
        let p0 = self.points[lower[0]];
        let start = (0..upper.len())
            .min_by(|&a, &b| {
                self.points[upper[a]].dist(p0).total_cmp(&self.points[upper[b]].dist(p0))
            })
            .unwrap_or(0);
        let mut l = lower.to_vec();
        l.push(lower[0]);
        let mut u: Vec<usize> = upper[start..].iter().chain(&upper[..start]).copied().collect();
        u.push(u[0]);
        // fractions must see the closing segment as real length
        let fl = fractions(&l.iter().map(|&i| self.points[i]).collect::<Vec<_>>(), false);
        let fu = fractions(&u.iter().map(|&i| self.points[i]).collect::<Vec<_>>(), false);
        let (n, m) = (l.len(), u.len());
        let (mut i, mut j) = (0, 0);
        while i + 1 < n || j + 1 < m {
            let advance_lower = if i + 1 >= n {
                false
            } else if j + 1 >= m {
                true
            } else {
                fl[i + 1] <= fu[j + 1]
            };
            if advance_lower {
                self.tri(l[i], l[i + 1], u[j]);
                i += 1;
            } else {
                self.tri(l[i], u[j + 1], u[j]);
                j += 1;
            }
        }
    }

    /// Triangulates the region between two closed rings that are star-shaped
    /// around `centre` in the xy-plane; each inner node is joined to the
    /// outer node nearest in polar angle. Both rings run counter-clockwise.
    pub fn zip_around(&mut self, outer: &[usize], inner: &[usize], centre: Point3) {
        let tau = 2.0 * std::f64::consts::PI;
        let angle = |p: Point3| (p.y - centre.y).atan2(p.x - centre.x);
        let base = angle(self.points[outer[0]]);
        // angles in [base, base + 2 pi), starting from the first node at or after `base`
        let unwrap = |ids: &[usize]| -> (Vec<usize>, Vec<f64>) {
            let a: Vec<f64> = ids.iter().map(|&i| (angle(self.points[i]) - base).rem_euclid(tau)).collect();
            let s = (0..ids.len()).min_by(|&i, &j| a[i].total_cmp(&a[j])).unwrap();
            let mut ord: Vec<usize> = ids[s..].iter().chain(&ids[..s]).copied().collect();
            let mut ang: Vec<f64> = a[s..].iter().chain(&a[..s]).copied().collect();
            for k in 1..ang.len() {
                if ang[k] < ang[k - 1] {
                    ang[k] += tau;
                }
            }
            ord.push(ord[0]);
            ang.push(ang[0] + tau);
            (ord, ang)
        };
        let (l, fl) = unwrap(outer);
        let (u, fu) = unwrap(inner);
        let (n, m) = (l.len(), u.len());
        let (mut i, mut j) = (0, 0);
        while i + 1 < n || j + 1 < m {
            let advance_lower = if i + 1 >= n {
                false
            } else if j + 1 >= m {
                true
            } else {
                0.5 * (fl[i] + fl[i + 1]) <= fu[j + 1]
            };
            if advance_lower {
                self.tri(l[i], l[i + 1], u[j]);
                i += 1;
            } else {
                self.tri(l[i], u[j + 1], u[j]);
                j += 1;
            }
        }
    }

    /// Zips consecutive rows.
    pub fn band(&mut self, rows: &[Vec<usize>]) {
        for w in rows.windows(2) {
            self.zip(&w[0], &w[1]);
        }
    }

    /// Regular quad grid, `rows[j][i]`, two triangles per cell.
    pub fn grid(&mut self, rows: &[Vec<usize>]) {
        for w in rows.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            for i in 0..a.len() - 1 {
                self.tri(a[i], a[i + 1], b[i + 1]);
                self.tri(a[i], b[i + 1], b[i]);
            }
        }
    }

    fn canonical_ids(&self) -> (Vec<usize>, usize) {
        let n = self.points.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for &(a, b) in &self.links {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut id = vec![usize::MAX; n];
        let mut next = 0;
        for i in 0..n {
            let r = find(&mut parent, i);
            if id[r] == usize::MAX {
                id[r] = next;
                next += 1;
            }
            id[i] = id[r];
        }
        (id, next)
    }

    /// Euclidean mesh with coherently repaired orientation. Unreferenced
    /// vertices are dropped.
    pub fn finish(self) -> Result<TriSurfaceMesh> {
        let (id, count) = self.canonical_ids();
        let mut verts = vec![Point3::ZERO; count];
        for (i, p) in self.points.iter().enumerate() {
            verts[id[i]] = *p;
        }
        let mut tris: Vec<Tri> = self.tris.iter().map(|t| t.map(|v| id[v])).collect();
        orient_coherently(&mut tris)?;
        compact(verts, tris)
    }

    /// Torus mesh: builder positions are treated as lifts.
    pub fn finish_torus(self, ambient: Ambient) -> Result<TriSurfaceMesh> {
        let (id, count) = self.canonical_ids();
        let mut tris: Vec<Tri> = self.tris.iter().map(|t| t.map(|v| id[v])).collect();
        let mut lifts: Vec<[Point3; 3]> = self.tris.iter().map(|t| t.map(|v| self.points[v])).collect();
        let flipped = orient_coherently(&mut tris)?;
        for (l, f) in lifts.iter_mut().zip(flipped) {
            if f {
                l.swap(1, 2);
            }
        }
        // drop unreferenced ids
        let mut used = vec![usize::MAX; count];
        let mut next = 0;
        for t in &tris {
            for &v in t {
                if used[v] == usize::MAX {
                    used[v] = next;
                    next += 1;
                }
            }
        }
        let tris = tris.into_iter().map(|t| t.map(|v| used[v])).collect();
        TriSurfaceMesh::from_lifted_corners(next, tris, &lifts, ambient)
    }
}

fn compact(verts: Vec<Point3>, tris: Vec<Tri>) -> Result<TriSurfaceMesh> {
    let mut used = vec![usize::MAX; verts.len()];
    let mut out = Vec::new();
    for t in &tris {
        for &v in t {
            if used[v] == usize::MAX {
                used[v] = out.len();
                out.push(verts[v]);
            }
        }
    }
    let tris = tris.into_iter().map(|t| t.map(|v| used[v])).collect();
    TriSurfaceMesh::new(out, tris)
}

/// Flips triangles so that every shared edge is traversed in opposite
/// directions, keeping the first triangle of each component. Returns which
/// triangles were flipped.
pub fn orient_coherently(tris: &mut [Tri]) -> Result<Vec<bool>> {
    let mut edge_tris: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (ti, t) in tris.iter().enumerate() {
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            edge_tris.entry((a.min(b), a.max(b))).or_default().push(ti);
        }
    }
    let n = tris.len();
    let mut flipped = vec![false; n];
    let mut seen = vec![false; n];
    let dir = |t: &Tri, a: usize, b: usize| (0..3).any(|k| t[k] == a && t[(k + 1) % 3] == b);
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(ti) = queue.pop_front() {
            let t = tris[ti];
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                for &tj in &edge_tris[&(a.min(b), a.max(b))] {
                    if tj == ti {
                        continue;
                    }
                    let same = dir(&tris[tj], a, b);
                    if seen[tj] {
                        if same {
                            return Err(Error::InvalidMesh("surface is not orientable".into()));
                        }
                        continue;
                    }
                    if same {
                        tris[tj].swap(1, 2);
                        flipped[tj] = true;
                    }
                    seen[tj] = true;
                    queue.push_back(tj);
                }
            }
        }
    }
    Ok(flipped)
}

/// `n + 1` evenly spaced values from `a` to `b`.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect()
}

/// Number of segments so that each is at most `res` long.
pub fn segments(len: f64, res: f64) -> usize {
    ((len / res) - 1e-9).ceil().max(1.0) as usize
}

/// Evenly spaced nodes on `[a, b]` at spacing at most `res`, with the extra
/// `breaks` inserted (merging near-duplicates).
pub fn nodes_with_breaks(a: f64, b: f64, res: f64, breaks: &[f64]) -> Vec<f64> {
    let mut cuts: Vec<f64> = vec![a, b];
    cuts.extend(breaks.iter().copied().filter(|x| *x > a && *x < b));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
    let mut out = vec![a];
    for w in cuts.windows(2) {
        let n = segments(w[1] - w[0], res);
        out.extend(linspace(w[0], w[1], n).into_iter().skip(1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zip_uneven_rows_gives_a_disk() {
        let mut b = MeshBuilder::new();
        let lo = b.add_row((0..6).map(|i| Point3::new(i as f64, 0.0, 0.0)));
        let hi = b.add_row((0..3).map(|i| Point3::new(2.5 * i as f64, 1.0, 0.0)));
        b.zip(&lo, &hi);
        let m = b.finish().unwrap();
        assert_eq!(m.euler_characteristic(), 1);
        assert!((m.area() - 5.0).abs() < 1e-12);
        assert!(m.is_coherently_oriented());
    }

    #[test]
    fn closed_zip_gives_an_annulus() {
        let mut b = MeshBuilder::new();
        let ring = |r: f64, n: usize| {
            (0..n)
                .map(move |k| {
                    let a = std::f64::consts::TAU * k as f64 / n as f64;
                    Point3::new(r * a.cos(), r * a.sin(), 0.0)
                })
                .collect::<Vec<_>>()
        };
        let lo = b.add_row(ring(2.0, 24));
        let hi = b.add_row(ring(1.0, 12));
        b.zip_closed(&lo, &hi);
        let m = b.finish().unwrap();
        assert_eq!(m.euler_characteristic(), 0);
        assert_eq!(m.boundary_loops().len(), 2);
        assert!(m.is_coherently_oriented());
    }

    #[test]
    fn mobius_is_rejected() {
        // a strip whose ends are glued with a half twist
        let mut b = MeshBuilder::new();
        let n = 5;
        let mut top = Vec::new();
        let mut bot = Vec::new();
        for k in 0..n {
            let a = std::f64::consts::PI * k as f64 / n as f64;
            top.push(b.add(Point3::new(a.cos(), a.sin(), 0.3)));
            bot.push(b.add(Point3::new(a.cos(), a.sin(), -0.3)));
        }
        for k in 0..n - 1 {
            b.tri(bot[k], bot[k + 1], top[k + 1]);
            b.tri(bot[k], top[k + 1], top[k]);
        }
        b.tri(bot[n - 1], top[0], bot[0]);
        b.tri(bot[n - 1], bot[0], top[n - 1]);
        assert!(b.finish().is_err());
    }

    #[test]
    fn breaks_are_inserted() {
        let v = nodes_with_breaks(-1.0, 1.0, 0.3, &[0.05, -0.05]);
        assert!(v.iter().any(|x| (x - 0.05).abs() < 1e-15));
        assert!(v.windows(2).all(|w| w[1] - w[0] <= 0.3 + 1e-12 && w[1] > w[0]));
    }
}
