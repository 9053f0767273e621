//! Triangle-level predicates: bounding boxes, closest points and
//! triangle-triangle intersection segments.

use super::vec3::Point3;

/// Absolute tolerance for intersection predicates.
pub const GEOM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub lo: Point3,
    pub hi: Point3,
}

impl Aabb {
    pub fn empty() -> Self {
        let inf = f64::INFINITY;
        Self { lo: Point3::new(inf, inf, inf), hi: Point3::new(-inf, -inf, -inf) }
    }

    pub fn of(points: &[Point3]) -> Self {
        let mut b = Self::empty();
        for p in points {
            b.grow(*p);
        }
        b
    }

    pub fn grow(&mut self, p: Point3) {
        self.lo = Point3::new(self.lo.x.min(p.x), self.lo.y.min(p.y), self.lo.z.min(p.z));
        self.hi = Point3::new(self.hi.x.max(p.x), self.hi.y.max(p.y), self.hi.z.max(p.z));
    }

    pub fn union(&self, o: &Aabb) -> Aabb {
        let mut b = *self;
        b.grow(o.lo);
        b.grow(o.hi);
        b
    }

    pub fn inflated(&self, r: f64) -> Aabb {
        let d = Point3::new(r, r, r);
        Aabb { lo: self.lo - d, hi: self.hi + d }
    }

    pub fn translated(&self, t: Point3) -> Aabb {
        Aabb { lo: self.lo + t, hi: self.hi + t }
    }

    pub fn overlaps(&self, o: &Aabb) -> bool {
        self.lo.x <= o.hi.x
            && o.lo.x <= self.hi.x
            && self.lo.y <= o.hi.y
            && o.lo.y <= self.hi.y
            && self.lo.z <= o.hi.z
            && o.lo.z <= self.hi.z
    }

    pub fn center(&self) -> Point3 {
        (self.lo + self.hi) * 0.5
    }

    /// Squared distance from `p` to the box (zero inside).
    pub fn dist_sq(&self, p: Point3) -> f64 {
        let dx = (self.lo.x - p.x).max(0.0).max(p.x - self.hi.x);
        let dy = (self.lo.y - p.y).max(0.0).max(p.y - self.hi.y);
        let dz = (self.lo.z - p.z).max(0.0).max(p.z - self.hi.z);
        dx * dx + dy * dy + dz * dz
    }
}

/// Closest point on triangle `abc` to `p`.
pub fn closest_point_on_triangle(p: Point3, a: Point3, b: Point3, c: Point3) -> Point3 {
    let ab = b - a;
    let ac = c - a;
    let ap = p - a;
    let d1 = ab.dot(ap);
    let d2 = ac.dot(ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return a;
    }
    let bp = p - b;
    let d3 = ab.dot(bp);
    let d4 = ac.dot(bp);
    if d3 >= 0.0 && d4 <= d3 {
        return b;
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let v = d1 / (d1 - d3);
        return a + ab * v;
    }
    let cp = p - c;
    let d5 = ab.dot(cp);
    let d6 = ac.dot(cp);
    if d6 >= 0.0 && d5 <= d6 {
        return c;
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let w = d2 / (d2 - d6);
        return a + ac * w;
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return b + (c - b) * w;
    }
    let denom = 1.0 / (va + vb + vc);
    let v = vb * denom;
    let w = vc * denom;
    a + ab * v + ac * w
}

pub fn point_triangle_distance(p: Point3, t: &[Point3; 3]) -> f64 {
    p.dist(closest_point_on_triangle(p, t[0], t[1], t[2]))
}

/// Result of intersecting two triangles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TriTri {
    Disjoint,
    /// Transversal contact along a segment (possibly a single point).
    Segment(Point3, Point3),
    /// The triangles share a plane and overlap there.
    Coplanar,
}

impl TriTri {
    pub fn intersects(&self) -> bool {
        !matches!(self, TriTri::Disjoint)
    }
}

fn plane(t: &[Point3; 3]) -> Option<(Point3, f64)> {
    let n = (t[1] - t[0]).cross(t[2] - t[0]);
    let len = n.norm();
    if len <= f64::MIN_POSITIVE {
        return None;
    }
    let n = n / len;
    Some((n, n.dot(t[0])))
}

/// Points where the triangle meets a plane given signed vertex distances.
fn plane_cut(t: &[Point3; 3], d: [f64; 3]) -> Vec<Point3> {
    let mut pts = Vec::with_capacity(2);
    for i in 0..3 {
        let j = (i + 1) % 3;
        if d[i] == 0.0 {
            pts.push(t[i]);
        }
        if d[i] * d[j] < 0.0 {
            let s = d[i] / (d[i] - d[j]);
            pts.push(t[i] + (t[j] - t[i]) * s);
        }
    }
    pts
}

fn snap(d: f64) -> f64 {
    if d.abs() <= GEOM_TOL {
        0.0
    } else {
        d
    }
}

/// Intersection of triangles `a` and `b` with tolerance [`GEOM_TOL`].
pub fn tri_tri(a: &[Point3; 3], b: &[Point3; 3]) -> TriTri {
    let (na, ca) = match plane(a) {
        Some(p) => p,
        None => return TriTri::Disjoint,
    };
    let (nb, cb) = match plane(b) {
        Some(p) => p,
        None => return TriTri::Disjoint,
    };
    let da = [0, 1, 2].map(|i| snap(nb.dot(a[i]) - cb));
    if da.iter().all(|&x| x > 0.0) || da.iter().all(|&x| x < 0.0) {
        return TriTri::Disjoint;
    }
    let db = [0, 1, 2].map(|i| snap(na.dot(b[i]) - ca));
    if db.iter().all(|&x| x > 0.0) || db.iter().all(|&x| x < 0.0) {
        return TriTri::Disjoint;
    }
    if da.iter().all(|&x| x == 0.0) {
        return if coplanar_overlap(a, b, na) { TriTri::Coplanar } else { TriTri::Disjoint };
    }
    let dir = na.cross(nb);
    if dir.norm() <= GEOM_TOL {
        // nearly parallel planes that still touch within tolerance
        return if coplanar_overlap(a, b, na) { TriTri::Coplanar } else { TriTri::Disjoint };
    }
    let pa = plane_cut(a, da);
    let pb = plane_cut(b, db);
    if pa.is_empty() || pb.is_empty() {
        return TriTri::Disjoint;
    }
    let interval = |pts: &[Point3]| {
        let mut lo = (f64::INFINITY, pts[0]);
        let mut hi = (f64::NEG_INFINITY, pts[0]);
        for p in pts {
            let s = dir.dot(*p);
            if s < lo.0 {
                lo = (s, *p);
            }
            if s > hi.0 {
                hi = (s, *p);
            }
        }
        (lo, hi)
    };
    let (alo, ahi) = interval(&pa);
    let (blo, bhi) = interval(&pb);
    let scale = dir.norm();
    if alo.0 > bhi.0 + GEOM_TOL * scale || blo.0 > ahi.0 + GEOM_TOL * scale {
        return TriTri::Disjoint;
    }
    let start = if alo.0 >= blo.0 { alo.1 } else { blo.1 };
    let end = if ahi.0 <= bhi.0 { ahi.1 } else { bhi.1 };
    // for nearly parallel planes the cut points can sit far from the line
    let on_both = |p: Point3| point_triangle_distance(p, a) <= 2.0 * GEOM_TOL && point_triangle_distance(p, b) <= 2.0 * GEOM_TOL;
    if ![start, end, start.lerp(end, 0.5)].into_iter().any(on_both) {
        return TriTri::Disjoint;
    }
    if dir.dot(end) < dir.dot(start) {
        // touching within tolerance
        return TriTri::Segment(start, start);
    }
    TriTri::Segment(start, end)
}

fn coplanar_overlap(a: &[Point3; 3], b: &[Point3; 3], n: Point3) -> bool {
    // project onto the dominant axis plane
    let ax = if n.x.abs() >= n.y.abs() && n.x.abs() >= n.z.abs() {
        0
    } else if n.y.abs() >= n.z.abs() {
        1
    } else {
        2
    };
    let proj = |p: Point3| -> (f64, f64) {
        match ax {
            0 => (p.y, p.z),
            1 => (p.z, p.x),
            _ => (p.x, p.y),
        }
    };
    let a2 = a.map(proj);
    let b2 = b.map(proj);
    for i in 0..3 {
        for j in 0..3 {
            if segments_cross_2d(a2[i], a2[(i + 1) % 3], b2[j], b2[(j + 1) % 3]) {
                return true;
            }
        }
    }
    point_in_tri_2d(a2[0], &b2) || point_in_tri_2d(b2[0], &a2)
}

fn orient2d(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn segments_cross_2d(p0: (f64, f64), p1: (f64, f64), q0: (f64, f64), q1: (f64, f64)) -> bool {
    let d1 = orient2d(q0, q1, p0);
    let d2 = orient2d(q0, q1, p1);
    let d3 = orient2d(p0, p1, q0);
    let d4 = orient2d(p0, p1, q1);
    let tol = GEOM_TOL * GEOM_TOL;
    if ((d1 > tol && d2 < -tol) || (d1 < -tol && d2 > tol))
        && ((d3 > tol && d4 < -tol) || (d3 < -tol && d4 > tol))
    {
        return true;
    }
    let on = |a: (f64, f64), b: (f64, f64), c: (f64, f64), d: f64| {
        d.abs() <= tol
            && c.0 >= a.0.min(b.0) - GEOM_TOL
            && c.0 <= a.0.max(b.0) + GEOM_TOL
            && c.1 >= a.1.min(b.1) - GEOM_TOL
            && c.1 <= a.1.max(b.1) + GEOM_TOL
    };
    on(q0, q1, p0, d1) || on(q0, q1, p1, d2) || on(p0, p1, q0, d3) || on(p0, p1, q1, d4)
}

fn point_in_tri_2d(p: (f64, f64), t: &[(f64, f64); 3]) -> bool {
    let s0 = orient2d(t[0], t[1], p);
    let s1 = orient2d(t[1], t[2], p);
    let s2 = orient2d(t[2], t[0], p);
    (s0 >= 0.0 && s1 >= 0.0 && s2 >= 0.0) || (s0 <= 0.0 && s1 <= 0.0 && s2 <= 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64, z: f64) -> Point3 {
        Point3::new(x, y, z)
    }

    #[test]
    fn crossing_triangles_give_segment() {
        let a = [p(-1.0, -1.0, 0.0), p(1.0, -1.0, 0.0), p(0.0, 1.0, 0.0)];
        let b = [p(0.0, 0.0, -1.0), p(0.0, 0.0, 1.0), p(0.0, 2.0, 0.0)];
        match tri_tri(&a, &b) {
            TriTri::Segment(s, e) => {
                assert!(s.z.abs() < 1e-12 && e.z.abs() < 1e-12);
                assert!(s.x.abs() < 1e-12 && e.x.abs() < 1e-12);
                let (lo, hi) = if s.y < e.y { (s.y, e.y) } else { (e.y, s.y) };
                assert!(lo.abs() < 1e-12 && (hi - 1.0).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parallel_sheets_disjoint() {
        let a = [p(0.0, 0.0, 0.0), p(1.0, 0.0, 0.0), p(0.0, 1.0, 0.0)];
        let b = a.map(|q| q + p(0.0, 0.0, 0.3));
        assert_eq!(tri_tri(&a, &b), TriTri::Disjoint);
    }

    #[test]
    fn nearly_coplanar_neighbours_apart_are_disjoint() {
        let a = [
            p(0.20000000074465119, 0.8138613861698227, 5.346534653409746),
            p(0.1999999988804202, 0.8099009901648392, 5.24752475237992),
            p(0.19999999938815932, 0.9049504950894299, 5.247524752416708),
        ];
        let b = [
            p(0.20000000052237446, 0.9069306930881965, 5.346534653431287),
            p(0.2000000006654254, 0.908910891097289, 5.4455445544372525),
            p(0.20000000106727997, 0.8178217821917518, 5.445544554425616),
        ];
        assert_eq!(tri_tri(&a, &b), TriTri::Disjoint);
    }

    #[test]
    fn coplanar_overlap_is_reported() {
        let a = [p(0.0, 0.0, 0.0), p(1.0, 0.0, 0.0), p(0.0, 1.0, 0.0)];
        let b = a.map(|q| q + p(0.2, 0.2, 0.0));
        assert_eq!(tri_tri(&a, &b), TriTri::Coplanar);
        let c = a.map(|q| q + p(2.0, 0.0, 0.0));
        assert_eq!(tri_tri(&a, &c), TriTri::Disjoint);
    }

    #[test]
    fn closest_point_regions() {
        let t = [p(0.0, 0.0, 0.0), p(1.0, 0.0, 0.0), p(0.0, 1.0, 0.0)];
        assert!((point_triangle_distance(p(0.2, 0.2, 0.5), &t) - 0.5).abs() < 1e-15);
        assert!((point_triangle_distance(p(-1.0, -1.0, 0.0), &t) - 2f64.sqrt()).abs() < 1e-15);
        assert!((point_triangle_distance(p(0.5, -2.0, 0.0), &t) - 2.0).abs() < 1e-15);
    }
}
