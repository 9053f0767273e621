//! The hexagonal tower curve, its mirror, the bridged curve, and the two
//! competing disks spanning it: the square with thin strips and the bridged
//! pair of flat disks.

use serde::{Deserialize, Serialize};

use super::build::{linspace, nodes_with_breaks, segments, MeshBuilder};
use crate::error::{Error, Result};
use crate::geom::{ClosedPolyline, Point3, TriSurfaceMesh};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExampleIParams {
    /// Half-width of the strips, and distance of the tower from `x = 0`.
    pub eps: f64,
    /// Tower height.
    #[serde(rename = "C")]
    pub c: f64,
    pub bridge_width: f64,
    /// Length removed from each strip tip at the bridge.
    pub trim: f64,
}

impl Default for ExampleIParams {
    fn default() -> Self {
        Self { eps: 0.05, c: 10.0, bridge_width: 0.05, trim: 0.025 }
    }
}

impl ExampleIParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.eps > 0.0
            && self.eps < 1.0
            && self.c > 0.0
            && self.bridge_width > 0.0
            && self.bridge_width <= self.eps
            && self.trim >= 0.0;
        if !ok || ![self.eps, self.c, self.bridge_width, self.trim].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "need 0 < eps < 1, C > 0, 0 < bridge_width <= eps, trim >= 0; got {self:?}"
            )));
        }
        Ok(())
    }

    /// The six corners `p1..p6`.
    pub fn corners(&self) -> [Point3; 6] {
        let (e, c) = (self.eps, self.c);
        [
            Point3::new(1.0, -1.0, 0.0),
            Point3::new(1.0, 1.0, 0.0),
            Point3::new(e, 1.0, 0.0),
            Point3::new(e, 1.0, c),
            Point3::new(e, -1.0, -c),
            Point3::new(e, -1.0, 0.0),
        ]
    }

    /// Bridge endpoints around `p5`: `u` on the leg from `p4`, `v` on the leg
    /// towards `p6`, each `bridge_width / 2` from `p5`.
    pub fn bridge_points(&self) -> (Point3, Point3) {
        let [_, _, _, p4, p5, p6] = self.corners();
        let t = self.bridge_width / 2.0;
        let u = p5 + (p4 - p5).normalized() * t;
        let v = p5 + (p6 - p5).normalized() * t;
        (u, v)
    }
}

pub fn build_gamma1(p: &ExampleIParams) -> Result<ClosedPolyline> {
    p.validate()?;
    ClosedPolyline::new(p.corners().to_vec())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MirrorPlane {
    X0,
    Y0,
    Z0,
}

pub fn reflect(p: Point3, plane: MirrorPlane) -> Point3 {
    match plane {
        MirrorPlane::X0 => Point3::new(-p.x, p.y, p.z),
        MirrorPlane::Y0 => Point3::new(p.x, -p.y, p.z),
        MirrorPlane::Z0 => Point3::new(p.x, p.y, -p.z),
    }
}

/// Reflects a curve and reverses its direction, keeping the image of vertex 0
/// first.
pub fn mirror_curve(c: &ClosedPolyline, plane: MirrorPlane) -> Result<ClosedPolyline> {
    if c.periods().is_some() {
        return Err(Error::InvalidParams("mirror_curve works in Euclidean space only".into()));
    }
    let n = c.len();
    let v = c.vertices();
    let out: Vec<Point3> = (0..n).map(|i| reflect(v[(n - i) % n], plane)).collect();
    ClosedPolyline::new(out)
}

/// Point at arclength `s` (taken modulo the length) and the index of the
/// segment containing it.
fn point_at(c: &ClosedPolyline, s: f64) -> (Point3, usize) {
    let total = c.length();
    let mut s = s.rem_euclid(total);
    for i in 0..c.len() {
        let l = c.segment(i).norm();
        if s <= l || i + 1 == c.len() {
            return (c.vertices()[i] + c.segment(i) * (s / l).min(1.0), i);
        }
        s -= l;
    }
    unreachable!()
}

/// Arclength of each vertex.
fn vertex_params(c: &ClosedPolyline) -> Vec<f64> {
    let mut out = vec![0.0];
    for i in 0..c.len() - 1 {
        out.push(out[i] + c.segment(i).norm());
    }
    out
}

struct Cut {
    before: Point3,
    after: Point3,
    // vertices strictly outside the removed arc, starting after it
    kept: Vec<Point3>,
}

fn cut_arc(c: &ClosedPolyline, a: Point3, width: f64) -> Result<Cut> {
    let (dist, s) = c.project(a);
    if dist > 1e-9 {
        return Err(Error::InvalidParams(format!("bridge point {a:?} is not on the curve")));
    }
    let total = c.length();
    let half = width / 2.0;
    let params = vertex_params(c);
    // the removed arc may only contain a vertex at the bridge point itself
    let mut available = f64::INFINITY;
    for &sv in &params {
        let mut d = (sv - s).rem_euclid(total);
        if d > total / 2.0 {
            d -= total;
        }
        if d.abs() > 1e-12 {
            available = available.min(d.abs());
        }
    }
    if half >= available {
        return Err(Error::BridgeTooWide { width, available: 2.0 * available });
    }
    let (before, _) = point_at(c, s - half);
    let (after, _) = point_at(c, s + half);
    let n = c.len();
    let mut order: Vec<(f64, Point3)> = params
        .iter()
        .zip(c.vertices())
        .map(|(&sv, &p)| ((sv - (s + half)).rem_euclid(total), p))
        .filter(|(d, _)| *d > 1e-12 && *d < total - width - 1e-12)
        .collect();
    order.sort_by(|x, y| x.0.total_cmp(&y.0));
    debug_assert!(order.len() <= n);
    Ok(Cut { before, after, kept: order.into_iter().map(|(_, p)| p).collect() })
}

/// Joins `c1` and `c2` by a thin bridge: an arc of length `width` centred at
/// `a1` is removed from `c1` (ends `u1` before, `v1` after), likewise at `a2`
/// on `c2` (`u2`, `v2`), and the rails `u1 -> v2`, `u2 -> v1` are added.
/// `c2` should be oriented like `mirror_curve(c1)` so the rails do not cross.
pub fn bridge_curves(
    c1: &ClosedPolyline,
    c2: &ClosedPolyline,
    a1: Point3,
    a2: Point3,
    width: f64,
) -> Result<ClosedPolyline> {
    if !(width > 0.0) {
        return Err(Error::InvalidParams("bridge width must be positive".into()));
    }
    let k1 = cut_arc(c1, a1, width)?;
    let k2 = cut_arc(c2, a2, width)?;
    let mut pts = vec![k1.after];
    pts.extend(k1.kept);
    pts.push(k1.before);
    pts.push(k2.after);
    pts.extend(k2.kept);
    pts.push(k2.before);
    ClosedPolyline::new(pts)
}

/// The bridged curve for the example: `gamma1` joined to its mirror at
/// `p5` and `q5`.
pub fn build_bridged_curve(p: &ExampleIParams) -> Result<ClosedPolyline> {
    let g1 = build_gamma1(p)?;
    let g2 = mirror_curve(&g1, MirrorPlane::X0)?;
    let p5 = p.corners()[4];
    bridge_curves(&g1, &g2, p5, reflect(p5, MirrorPlane::X0), p.bridge_width)
}

pub fn build_tau(side_half: f64) -> ClosedPolyline {
    let h = side_half;
    ClosedPolyline::new(vec![
        Point3::new(h, -h, 0.0),
        Point3::new(h, h, 0.0),
        Point3::new(-h, h, 0.0),
        Point3::new(-h, -h, 0.0),
    ])
    .expect("square is valid")
}

/// The square `[-1,1]^2` and a flat grid disk on it.
pub fn build_tau_and_e(res: f64) -> Result<(ClosedPolyline, TriSurfaceMesh)> {
    if !(res > 0.0) {
        return Err(Error::InvalidParams("resolution must be positive".into()));
    }
    let nodes = nodes_with_breaks(-1.0, 1.0, res, &[]);
    let mut b = MeshBuilder::new();
    let rows: Vec<Vec<usize>> = nodes
        .iter()
        .map(|&y| b.add_row(nodes.iter().map(|&x| Point3::new(x, y, 0.0))))
        .collect();
    b.grid(&rows);
    let m = orient_like(b.finish()?, &build_tau(1.0));
    Ok((build_tau(1.0), m))
}

/// Flips `m` if its boundary runs against `target`.
pub(crate) fn orient_like(m: TriSurfaceMesh, target: &ClosedPolyline) -> TriSurfaceMesh {
    match crate::geom::boundary_multiplicity(&m, target, 1e-7) {
        Ok(k) if k < 0 => m.flipped(),
        _ => m,
    }
}

/// Square disk with the three strips along the tower legs, cut at the bridge
/// so that its single boundary loop is the bridged curve.
pub fn build_ehat_mesh(p: &ExampleIParams, res: f64) -> Result<TriSurfaceMesh> {
    p.validate()?;
    if !(res > 0.0) {
        return Err(Error::InvalidParams("resolution must be positive".into()));
    }
    let half_w = p.bridge_width / 2.0;
    if (p.trim - half_w).abs() > 1e-12 {
        return Err(Error::IncompatibleTrim(format!(
            "trim {} must equal half the bridge width {half_w} for the strip boundary to follow the bridge rails",
            p.trim
        )));
    }
    let (eps, c) = (p.eps, p.c);
    let diag = 2.0 * (1.0 + c * c).sqrt();
    if p.trim >= c || p.trim >= diag {
        return Err(Error::IncompatibleTrim("trim exceeds a strip length".into()));
    }
    let xs = nodes_with_breaks(-1.0, 1.0, res, &[-eps, eps]);
    let ys = nodes_with_breaks(-1.0, 1.0, res, &[]);
    let mut b = MeshBuilder::new();
    let grid: Vec<Vec<usize>> = ys
        .iter()
        .map(|&y| b.add_row(xs.iter().map(|&x| Point3::new(x, y, 0.0))))
        .collect();
    b.grid(&grid);
    let i_lo = xs.iter().position(|x| (x + eps).abs() < 1e-12).unwrap();
    let i_hi = xs.iter().position(|x| (x - eps).abs() < 1e-12).unwrap();
    let across: Vec<f64> = xs[i_lo..=i_hi].to_vec();
    let row_at = |b: &mut MeshBuilder, f: &dyn Fn(f64) -> Point3| -> Vec<usize> {
        b.add_row(across.iter().map(|&x| f(x)))
    };

    // vertical strip at y = 1 up to the tower top
    let mut rows = vec![grid[ys.len() - 1][i_lo..=i_hi].to_vec()];
    for &z in linspace(0.0, c, segments(c, res)).iter().skip(1) {
        rows.push(row_at(&mut b, &|x| Point3::new(x, 1.0, z)));
    }
    // slanted strip z = C y, from the top down to the bridge cut
    let y_cut = -1.0 + p.trim / (1.0 + c * c).sqrt();
    let n_diag = segments(diag - p.trim, res);
    for &y in linspace(1.0, y_cut, n_diag).iter().skip(1) {
        rows.push(row_at(&mut b, &|x| Point3::new(x, y, c * y)));
    }
    b.band(&rows);

    // vertical strip at y = -1 down to the bridge cut
    let mut rows = vec![grid[0][i_lo..=i_hi].to_vec()];
    let z_end = -c + p.trim;
    for &z in linspace(0.0, z_end, segments(-z_end, res)).iter().skip(1) {
        rows.push(row_at(&mut b, &|x| Point3::new(x, -1.0, z)));
    }
    b.band(&rows);

    let gamma = build_bridged_curve(p)?;
    Ok(orient_like(b.finish()?, &gamma))
}

/// Rows across a planar ruled patch between edge `a0 -> a1` and edge
/// `b0 -> b1`; `first` supplies the indices of row 0.
fn ruled_rows(
    b: &mut MeshBuilder,
    first: Vec<usize>,
    (a0, a1): (Point3, Point3),
    (b0, b1): (Point3, Point3),
    res: f64,
) -> Vec<Vec<usize>> {
    let n = segments(a0.dist(a1).max(b0.dist(b1)), res);
    let mut rows = vec![first];
    for k in 1..=n {
        let f = k as f64 / n as f64;
        let (pa, pb) = (a0.lerp(a1, f), b0.lerp(b1, f));
        let len = pa.dist(pb);
        if len < 1e-12 {
            rows.push(vec![b.add(pa)]);
        } else {
            let m = segments(len, res);
            rows.push(b.add_row((0..=m).map(|i| pa.lerp(pb, i as f64 / m as f64))));
        }
    }
    rows
}

/// One half of the bridged pair: the flat disk spanning `gamma1` with its
/// corner at `p5` cut along `u -> v`. Returns the builder rows of the cut
/// edge (from `v` to `u`).
fn half_pair(b: &mut MeshBuilder, p: &ExampleIParams, res: f64) -> Vec<usize> {
    let [_, _, p3, p4, _, p6] = p.corners();
    let eps = p.eps;
    let (u, v) = p.bridge_points();
    let o = Point3::new(eps, 0.0, 0.0);
    // rectangle [eps, 1] x [-1, 1] at z = 0
    let xs = nodes_with_breaks(eps, 1.0, res, &[]);
    let ys = nodes_with_breaks(-1.0, 1.0, res, &[0.0]);
    let grid: Vec<Vec<usize>> = ys
        .iter()
        .map(|&y| b.add_row(xs.iter().map(|&x| Point3::new(x, y, 0.0))))
        .collect();
    b.grid(&grid);
    let col: Vec<usize> = grid.iter().map(|r| r[0]).collect();
    let mid = ys.iter().position(|y| y.abs() < 1e-12).unwrap();
    // upper flap (p3, p4, O'): rows run from the p3-p4 edge to the O'-p4 edge
    let first: Vec<usize> = col[mid..].iter().rev().copied().collect();
    let rows = ruled_rows(b, first, (p3, p4), (o, p4), res);
    b.band(&rows);
    // lower flap (O', u, v, p6)
    let first: Vec<usize> = col[..=mid].to_vec();
    let rows = ruled_rows(b, first, (p6, v), (o, u), res);
    b.band(&rows);
    rows.last().unwrap().clone()
}

/// Initial mesh near the bridged pair: the flat disk spanning `gamma1`, its
/// mirror image, and a planar rail quad joining the two cut corners.
pub fn build_sigmahat_init(p: &ExampleIParams, res: f64) -> Result<TriSurfaceMesh> {
    p.validate()?;
    if !(res > 0.0) {
        return Err(Error::InvalidParams("resolution must be positive".into()));
    }
    let mut b = MeshBuilder::new();
    let cut1 = half_pair(&mut b, p, res);
    let start = b.points.len();
    let mut mirror = MeshBuilder::new();
    let cut2 = half_pair(&mut mirror, p, res);
    for q in &mirror.points {
        b.add(Point3::new(-q.x, q.y, q.z));
    }
    for t in &mirror.tris {
        b.tri(t[0] + start, t[2] + start, t[1] + start);
    }
    let cut2: Vec<usize> = cut2.iter().map(|i| i + start).collect();
    let n = segments(2.0 * p.eps, res);
    let pts: Vec<Point3> = cut1.iter().map(|&i| b.points[i]).collect();
    let mut rows = vec![cut1.clone()];
    for k in 1..n {
        let x = p.eps - 2.0 * p.eps * k as f64 / n as f64;
        rows.push(b.add_row(pts.iter().map(|q| Point3::new(x, q.y, q.z))));
    }
    rows.push(cut2);
    b.band(&rows);
    let gamma = build_bridged_curve(p)?;
    Ok(orient_like(b.finish()?, &gamma))
}

/// Exact area of [`build_sigmahat_init`]: two flat disks of area
/// `2(1-eps) + C` minus the cut corner triangles, plus the rail quad.
pub fn sigmahat_init_area(p: &ExampleIParams) -> f64 {
    let t = p.bridge_width / 2.0;
    let c = p.c;
    let corner = 0.5 * t * t / (1.0 + c * c).sqrt();
    let (u, v) = p.bridge_points();
    2.0 * (2.0 * (1.0 - p.eps) + c - corner) + 2.0 * p.eps * u.dist(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{boundary_multiplicity, self_intersections};

    #[test]
    fn gamma1_vertices_and_box() {
        let p = ExampleIParams::default();
        let g = build_gamma1(&p).unwrap();
        let v = g.vertices();
        assert_eq!(v[0], Point3::new(1.0, -1.0, 0.0));
        assert_eq!(v[4], Point3::new(0.05, -1.0, -10.0));
        assert!(v[2..].iter().all(|q| q.x == 0.05));
        for q in v {
            assert!(q.x >= 0.05 && q.x <= 1.0 && q.y.abs() <= 1.0 && q.z.abs() <= 10.0);
        }
        // hand sum: 2 + (1 - eps) + C + 2 sqrt(1 + C^2) + C + (1 - eps)
        let want = 2.0 + 2.0 * 0.95 + 20.0 + 2.0 * 101f64.sqrt();
        assert!((g.length() - want).abs() < 1e-12);
    }

    #[test]
    fn mirror_is_an_involution() {
        let g = build_gamma1(&ExampleIParams::default()).unwrap();
        let m = mirror_curve(&g, MirrorPlane::X0).unwrap();
        assert_eq!(m.vertices()[0], Point3::new(-1.0, -1.0, 0.0));
        assert_eq!(m.vertices()[1], Point3::new(-0.05, -1.0, 0.0));
        let back = mirror_curve(&m, MirrorPlane::X0).unwrap();
        assert_eq!(back.vertices(), g.vertices());
        let on = Point3::new(0.0, 0.3, 0.2);
        assert_eq!(reflect(on, MirrorPlane::X0), on);
    }

    #[test]
    fn bridging_two_squares() {
        let sq = |cx: f64| {
            ClosedPolyline::new(vec![
                Point3::new(cx - 1.0, -1.0, 0.0),
                Point3::new(cx + 1.0, -1.0, 0.0),
                Point3::new(cx + 1.0, 1.0, 0.0),
                Point3::new(cx - 1.0, 1.0, 0.0),
            ])
            .unwrap()
        };
        let c1 = sq(0.0);
        let c2 = sq(5.0);
        let w = 0.1;
        let out = bridge_curves(&c1, &c2, Point3::new(1.0, 0.0, 0.0), Point3::new(4.0, 0.0, 0.0), w).unwrap();
        assert_eq!(out.len(), 12);
        assert!(out.is_simple(1e-9));
        let rails = 2.0 * 3.0;
        assert!((out.length() - (c1.length() + c2.length() - 2.0 * w + rails)).abs() < 1e-12);
        assert!(matches!(
            bridge_curves(&c1, &c2, Point3::new(1.0, 0.0, 0.0), Point3::new(4.0, 0.0, 0.0), 2.5),
            Err(Error::BridgeTooWide { .. })
        ));
    }

    #[test]
    fn bridged_tower_length() {
        let p = ExampleIParams::default();
        let g1 = build_gamma1(&p).unwrap();
        let b = build_bridged_curve(&p).unwrap();
        let (u, v) = p.bridge_points();
        let rails = 2.0 * u.dist(reflect(u, MirrorPlane::X0)).max(v.dist(reflect(v, MirrorPlane::X0)));
        let want = 2.0 * g1.length() - 2.0 * p.bridge_width + rails;
        assert!((b.length() - want).abs() < 1e-12);
        assert!(b.is_simple(1e-9));
    }

    #[test]
    fn square_disk() {
        let (tau, e) = build_tau_and_e(0.1).unwrap();
        assert!((e.area() - 4.0).abs() < 1e-12);
        assert_eq!(boundary_multiplicity(&e, &tau, 1e-12).unwrap(), 1);
        assert!(self_intersections(&e).is_empty());
    }

    #[test]
    fn strip_disk_matches_exact_area_and_bridged_boundary() {
        let p = ExampleIParams::default();
        let m = build_ehat_mesh(&p, 0.1).unwrap();
        let want = crate::ledger::ehat_area_exact(p.eps, p.c, p.trim);
        assert!((m.area() - want).abs() < 1e-9, "{} vs {want}", m.area());
        assert_eq!(m.euler_characteristic(), 1);
        assert!(m.is_coherently_oriented());
        let gamma = build_bridged_curve(&p).unwrap();
        assert_eq!(boundary_multiplicity(&m, &gamma, 1e-9).unwrap(), 1);
        let hits = self_intersections(&m);
        assert!(!hits.is_empty());
        // crossing sits where the slanted strip passes z = 0
        for (i, _) in hits.iter().take(5) {
            let c = m.triangles[*i].map(|v| m.vertices[v]);
            assert!(c.iter().all(|q| q.y.abs() < 0.2 && q.z.abs() < 2.1));
        }
    }

    #[test]
    fn strip_disk_rejects_bad_trim() {
        let p = ExampleIParams { trim: 0.01, ..Default::default() };
        assert!(matches!(build_ehat_mesh(&p, 0.1), Err(Error::IncompatibleTrim(_))));
    }

    #[test]
    fn bridged_pair_is_an_embedded_disk() {
        let p = ExampleIParams::default();
        let m = build_sigmahat_init(&p, 0.1).unwrap();
        assert!((m.area() - sigmahat_init_area(&p)).abs() < 1e-9, "{} vs {}", m.area(), sigmahat_init_area(&p));
        assert_eq!(m.euler_characteristic(), 1);
        assert!(m.is_coherently_oriented());
        let gamma = build_bridged_curve(&p).unwrap();
        assert_eq!(boundary_multiplicity(&m, &gamma, 1e-9).unwrap(), 1);
        assert!(self_intersections(&m).is_empty());
    }
}
