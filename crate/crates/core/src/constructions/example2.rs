//! Flat torus with a sheared box removed: the horizontal slice surface, the
//! cup in the box boundary, and the handle surgery joining them.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::build::{nodes_with_breaks, segments, MeshBuilder};
use crate::error::{Error, Result};
use crate::geom::{boundary_multiplicity, self_intersections, Ambient, ClosedPolyline, Parallelepiped, Point3, TriSurfaceMesh};
use crate::ledger::{solve_c0, DcVariant};

/// Default number of rim vertices for surgery disks.
pub const RIM_SEGMENTS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExampleIIParams {
    /// Torus height (the x and y periods are 1).
    pub h: f64,
    /// Margin of the box base inside the unit square.
    pub delta: f64,
    /// Shear angle of the box walls.
    pub theta0: f64,
    /// Surgery disk radius.
    pub eps: f64,
    /// Slice height.
    pub c: f64,
}

impl Default for ExampleIIParams {
    fn default() -> Self {
        Self { h: 0.012, delta: 0.15625, theta0: 0.1f64.atan(), eps: 0.014, c: 0.006 }
    }
}

impl ExampleIIParams {
    /// Horizontal offset of the box top relative to its base.
    pub fn sigma(&self) -> f64 {
        self.h / 3.0 / self.theta0.tan()
    }

    /// Side of the square cross-section.
    pub fn side(&self) -> f64 {
        1.0 - 2.0 * self.delta
    }

    /// Shift of the cross-section at height `z`.
    pub fn shift_at(&self, z: f64) -> f64 {
        (z - self.h / 3.0) / self.theta0.tan()
    }

    /// Checks everything except the slice height.
    pub fn validate_shape(&self) -> Result<()> {
        let mut failed = Vec::new();
        let vals = [self.h, self.delta, self.theta0, self.eps, self.c];
        if !vals.iter().all(|v| v.is_finite()) {
            failed.push("all parameters finite".to_string());
        }
        if !(self.h > 0.0) {
            failed.push("h > 0".into());
        }
        if !(self.delta > 0.0 && self.delta < 0.5) {
            failed.push("0 < delta < 1/2".into());
        }
        if !(self.theta0 > 0.0 && self.theta0.tan() < 1.0 / 6.0) {
            failed.push("0 < tan(theta0) < 1/6".into());
        }
        let s = self.sigma();
        if !(s < self.delta) {
            failed.push(format!("sigma = {s} < delta"));
        }
        if !(s > 2.0 * self.h) {
            failed.push(format!("sigma = {s} > 2h"));
        }
        if !(self.h < self.eps && self.eps < s / 2.0) {
            failed.push(format!("h < eps < sigma/2 = {}", s / 2.0));
        }
        if failed.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!("violated: {}", failed.join("; "))))
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_shape()?;
        let h = self.h;
        if !(self.c > h / 3.0 && self.c < 2.0 * h / 3.0) {
            return Err(Error::InvalidParams(format!("violated: h/3 < c < 2h/3 (c = {})", self.c)));
        }
        Ok(())
    }

    fn check_height(&self, c: f64) -> Result<()> {
        let (lo, hi) = (self.h / 3.0, 2.0 * self.h / 3.0);
        if c < lo - 1e-15 || c > hi + 1e-15 {
            return Err(Error::InvalidParams(format!("slice height {c} outside [{lo}, {hi}]")));
        }
        Ok(())
    }
}

pub fn build_parallelepiped(p: &ExampleIIParams) -> Result<Parallelepiped> {
    p.validate_shape()?;
    let (d, h) = (p.delta, p.h);
    Parallelepiped::from_base(d, 1.0 - d, d, 1.0 - d, h / 3.0, Point3::new(-p.sigma(), 0.0, h / 3.0))
}

/// The flat torus `[0,1]^2 x [0,h]` with the box excluded.
pub fn example2_ambient(p: &ExampleIIParams) -> Result<Ambient> {
    Ambient::torus(Point3::new(1.0, 1.0, p.h), Some(build_parallelepiped(p)?))
}

fn square_at(p: &ExampleIIParams, c: f64) -> [f64; 4] {
    let s = p.shift_at(c);
    [p.delta - s, 1.0 - p.delta - s, p.delta, 1.0 - p.delta]
}

/// Boundary of the box cross-section at height `c`, counter-clockwise seen
/// from above.
pub fn gamma_at(p: &ExampleIIParams, c: f64) -> Result<ClosedPolyline> {
    p.validate_shape()?;
    p.check_height(c)?;
    let [x0, x1, y0, y1] = square_at(p, c);
    ClosedPolyline::new(vec![
        Point3::new(x0, y0, c),
        Point3::new(x1, y0, c),
        Point3::new(x1, y1, c),
        Point3::new(x0, y1, c),
    ])
}

pub fn build_gamma_c(p: &ExampleIIParams) -> Result<ClosedPolyline> {
    gamma_at(p, p.c)
}

/// A round disk inside a planar sheet, meshed with concentric rings so that
/// surgery can remove it along an exact regular polygon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarPatch {
    pub cx: f64,
    pub cy: f64,
    /// Radius of the disk.
    pub radius: f64,
    /// Half-size of the square cell block replaced by the patch.
    pub half: f64,
    pub segments: usize,
}

impl PolarPatch {
    fn contains_cell(&self, xm: f64, ym: f64) -> bool {
        (xm - self.cx).abs() < self.half && (ym - self.cy).abs() < self.half
    }

    fn breaks_x(&self) -> [f64; 2] {
        [self.cx - self.half, self.cx + self.half]
    }

    fn breaks_y(&self) -> [f64; 2] {
        [self.cy - self.half, self.cy + self.half]
    }
}

/// Quad grid over `xs x ys` at height `z`, minus the cells for which `hole`
/// holds, with an optional polar patch. Returns the grid rows.
fn sheet(
    b: &mut MeshBuilder,
    xs: &[f64],
    ys: &[f64],
    lift: &dyn Fn(f64, f64) -> Point3,
    hole: &dyn Fn(f64, f64) -> bool,
    patch: Option<&PolarPatch>,
) -> Vec<Vec<usize>> {
    let rows: Vec<Vec<usize>> = ys.iter().map(|&y| b.add_row(xs.iter().map(|&x| lift(x, y)))).collect();
    for j in 0..ys.len() - 1 {
        for i in 0..xs.len() - 1 {
            let (xm, ym) = (0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1]));
            if hole(xm, ym) || patch.is_some_and(|q| q.contains_cell(xm, ym)) {
                continue;
            }
            let (a, c) = (&rows[j], &rows[j + 1]);
            b.tri(a[i], a[i + 1], c[i + 1]);
            b.tri(a[i], c[i + 1], c[i]);
        }
    }
    if let Some(q) = patch {
        let at = |v: &[f64], t: f64| v.iter().position(|x| (x - t).abs() < 1e-12).expect("patch break");
        let (i0, i1) = (at(xs, q.cx - q.half), at(xs, q.cx + q.half));
        let (j0, j1) = (at(ys, q.cy - q.half), at(ys, q.cy + q.half));
        let mut square = Vec::new();
        square.extend((i0..i1).map(|i| rows[j0][i]));
        square.extend((j0..j1).map(|j| rows[j][i1]));
        square.extend((i0 + 1..=i1).rev().map(|i| rows[j1][i]));
        square.extend((j0 + 1..=j1).rev().map(|j| rows[j][i0]));
        let n = q.segments;
        let ring = |b: &mut MeshBuilder, r: f64| -> Vec<usize> {
            b.add_row((0..n).map(|k| {
                let t = 2.0 * PI * k as f64 / n as f64;
                lift(q.cx + r * t.cos(), q.cy + r * t.sin())
            }))
        };
        let outer = ring(b, q.radius);
        let inner = ring(b, q.radius / 2.0);
        let centre = b.add(lift(q.cx, q.cy));
        b.zip_around(&square, &outer, lift(q.cx, q.cy));
        b.zip_closed(&outer, &inner);
        for k in 0..n {
            b.tri(inner[k], inner[(k + 1) % n], centre);
        }
    }
    rows
}

fn orient_to(m: TriSurfaceMesh, target: &ClosedPolyline) -> Result<TriSurfaceMesh> {
    match boundary_multiplicity(&m, target, 1e-9)? {
        k if k < 0 => Ok(m.flipped()),
        _ => Ok(m),
    }
}

/// The slice `{z = c}` of the torus minus the box cross-section, with an
/// optional polar patch. Boundary equals [`gamma_at`] with multiplicity 1.
pub fn sigma_c_mesh_at(p: &ExampleIIParams, c: f64, res: f64, patch: Option<&PolarPatch>) -> Result<TriSurfaceMesh> {
    let gamma = gamma_at(p, c)?;
    if !(res > 0.0) {
        return Err(Error::InvalidParams("resolution must be positive".into()));
    }
    let [x0, x1, y0, y1] = square_at(p, c);
    let mut bx = vec![x0, x1];
    let mut by = vec![y0, y1];
    if let Some(q) = patch {
        bx.extend(q.breaks_x());
        by.extend(q.breaks_y());
    }
    let xs = nodes_with_breaks(0.0, 1.0, res, &bx);
    let ys = nodes_with_breaks(0.0, 1.0, res, &by);
    let mut b = MeshBuilder::new();
    let hole = |x: f64, y: f64| x > x0 && x < x1 && y > y0 && y < y1;
    let rows = sheet(&mut b, &xs, &ys, &|x, y| Point3::new(x, y, c), &hole, patch);
    let (nx, ny) = (xs.len() - 1, ys.len() - 1);
    for row in &rows {
        b.identify(row[nx], row[0]);
    }
    for i in 0..=nx {
        b.identify(rows[ny][i], rows[0][i]);
    }
    orient_to(b.finish_torus(example2_ambient(p)?)?, &gamma)
}

pub fn build_sigma_c_mesh(p: &ExampleIIParams, res: f64) -> Result<TriSurfaceMesh> {
    sigma_c_mesh_at(p, p.c, res, None)
}

/// The cup in the box boundary below height `c`: the base square plus the
/// four wall strips from `h/3` to `c`. Boundary equals [`gamma_at`].
pub fn dc_mesh_at(p: &ExampleIIParams, c: f64, res: f64, patch: Option<&PolarPatch>) -> Result<TriSurfaceMesh> {
    let gamma = gamma_at(p, c)?;
    if !(res > 0.0) {
        return Err(Error::InvalidParams("resolution must be positive".into()));
    }
    let (d, z0) = (p.delta, p.h / 3.0);
    let mut bx = Vec::new();
    let mut by = Vec::new();
    if let Some(q) = patch {
        bx.extend(q.breaks_x());
        by.extend(q.breaks_y());
    }
    let xs = nodes_with_breaks(d, 1.0 - d, res, &bx);
    let ys = nodes_with_breaks(d, 1.0 - d, res, &by);
    let mut b = MeshBuilder::new();
    let rows = sheet(&mut b, &xs, &ys, &|x, y| Point3::new(x, y, z0), &|_, _| false, patch);
    let height = c - z0;
    if height > 1e-15 {
        let (nx, ny) = (xs.len() - 1, ys.len() - 1);
        let mut rim: Vec<usize> = Vec::new();
        rim.extend((0..nx).map(|i| rows[0][i]));
        rim.extend((0..ny).map(|j| rows[j][nx]));
        rim.extend((1..=nx).rev().map(|i| rows[ny][i]));
        rim.extend((1..=ny).rev().map(|j| rows[j][0]));
        rim.push(rim[0]);
        let base: Vec<Point3> = rim.iter().map(|&i| b.points[i]).collect();
        let k = segments(height, res);
        let mut walls = vec![rim];
        for step in 1..=k {
            let z = z0 + height * step as f64 / k as f64;
            let s = p.shift_at(z);
            let mut row = b.add_row(base[..base.len() - 1].iter().map(|q| Point3::new(q.x - s, q.y, z)));
            row.push(row[0]);
            walls.push(row);
        }
        b.band(&walls);
    }
    orient_to(b.finish_torus(example2_ambient(p)?)?, &gamma)
}

pub fn build_dc_mesh(p: &ExampleIIParams, res: f64) -> Result<TriSurfaceMesh> {
    dc_mesh_at(p, p.c, res, None)
}

/// Which way the surgery tube is attached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HandleSide {
    /// Straight tube; boundary multiplicities add.
    Correct,
    /// Tube whose rim correspondence is reversed (each cross-section turns
    /// half a revolution about a horizontal axis); coherent orientation then
    /// forces the two boundaries to cancel.
    Opposite,
}

/// Rim of the removed disk: `(vertex, lifted position, angle)` sorted by angle.
fn disk_rim(m: &TriSurfaceMesh, centre: Point3, r: f64, frame: (Point3, Point3)) -> Result<(Vec<bool>, Vec<(usize, Point3, f64)>)> {
    let amb = &m.ambient;
    let lift = |v: usize| centre + amb.min_image(centre, m.vertices[v]);
    let inside: Vec<bool> = (0..m.vertex_count()).map(|v| lift(v).dist(centre) <= r * (1.0 + 1e-9)).collect();
    let drop: Vec<bool> = m.triangles.iter().map(|t| t.iter().all(|&v| inside[v])).collect();
    let mut on_rim = vec![false; m.vertex_count()];
    for (t, tri) in m.triangles.iter().enumerate() {
        if !drop[t] {
            for &v in tri {
                on_rim[v] |= inside[v];
            }
        }
    }
    if !drop.iter().any(|&d| d) {
        return Err(Error::Surgery(format!("no disk of radius {r} around {centre:?}")));
    }
    let mut rim: Vec<(usize, Point3, f64)> = (0..m.vertex_count())
        .filter(|&v| on_rim[v])
        .map(|v| {
            let q = lift(v) - centre;
            (v, lift(v), q.dot(frame.1).atan2(q.dot(frame.0)))
        })
        .collect();
    rim.sort_by(|a, b| a.2.total_cmp(&b.2));
    Ok((drop, rim))
}

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

/// Removes the disk of radius `r` around `centre_a` from `a` and around
/// `centre_b` from `b`, and joins the two rims by a tube running from
/// `centre_a` to `centre_b` (as given, so on a torus the choice of lift of
/// `centre_b` picks the route). The tube is oriented from `a`'s rim and `b`
/// is flipped if needed. Both meshes must share the ambient and have
/// matching rims.
pub fn mesh_surgery(
    a: &TriSurfaceMesh,
    b: &TriSurfaceMesh,
    centre_a: Point3,
    centre_b: Point3,
    r: f64,
    side: HandleSide,
) -> Result<TriSurfaceMesh> {
    if a.ambient != b.ambient {
        return Err(Error::Surgery("meshes live in different ambients".into()));
    }
    let axis_vec = centre_b - centre_a;
    let len = axis_vec.norm();
    if !(r > 0.0) || len < 1e-12 {
        return Err(Error::Surgery("need r > 0 and distinct centres".into()));
    }
    let axis = axis_vec * (1.0 / len);
    let helper = if axis.z.abs() < 0.9 { Point3::new(0.0, 0.0, 1.0) } else { Point3::new(1.0, 0.0, 0.0) };
    let e1 = helper.cross(axis).normalized();
    let e2 = axis.cross(e1);
    let (drop_a, rim_a) = disk_rim(a, centre_a, r, (e1, e2))?;
    let (drop_b, rim_b) = disk_rim(b, centre_b, r, (e1, e2))?;
    let n = rim_a.len();
    if rim_b.len() != n || n < 3 {
        return Err(Error::Surgery(format!("rim sizes differ ({n} vs {})", rim_b.len())));
    }
    // partner on b's rim for each vertex of a's rim
    let partner: Vec<usize> = rim_a
        .iter()
        .map(|&(_, _, phi)| {
            let want = match side {
                HandleSide::Correct => phi,
                HandleSide::Opposite => -phi,
            };
            (0..n).min_by(|&i, &j| angle_gap(rim_b[i].2, want).total_cmp(&angle_gap(rim_b[j].2, want))).unwrap()
        })
        .collect();
    for (i, &j) in partner.iter().enumerate() {
        let want = if side == HandleSide::Correct { rim_a[i].2 } else { -rim_a[i].2 };
        if angle_gap(rim_b[j].2, want) > 1e-6 {
            return Err(Error::Surgery("rims do not match vertex for vertex".into()));
        }
    }

    let mut builder = MeshBuilder::new();
    let off_b = a.vertex_count();
    for v in &a.vertices {
        builder.add(*v);
    }
    for v in &b.vertices {
        builder.add(*v);
    }
    let add_tri = |bd: &mut MeshBuilder, ids: [usize; 3], lifts: [Point3; 3]| {
        let mut c = [0; 3];
        for k in 0..3 {
            c[k] = if lifts[k] == bd.points[ids[k]] {
                ids[k]
            } else {
                let x = bd.add(lifts[k]);
                bd.identify(x, ids[k]);
                x
            };
        }
        bd.tri(c[0], c[1], c[2]);
    };
    for (t, tri) in a.triangles.iter().enumerate() {
        if !drop_a[t] {
            add_tri(&mut builder, *tri, a.tri_lifted(t));
        }
    }
    for (t, tri) in b.triangles.iter().enumerate() {
        if !drop_b[t] {
            add_tri(&mut builder, tri.map(|v| v + off_b), b.tri_lifted(t));
        }
    }
    let first_tube = builder.tris.len();
    let rings = segments(len, r / 4.0).max(1);
    let mut prev: Vec<usize> = rim_a
        .iter()
        .map(|&(v, p, _)| {
            let x = builder.add(p);
            builder.identify(x, v);
            x
        })
        .collect();
    for k in 1..=rings {
        let t = k as f64 / rings as f64;
        let row: Vec<usize> = (0..n)
            .map(|i| {
                let (v, pb) = (rim_b[partner[i]].0, rim_b[partner[i]].1);
                if k == rings {
                    let x = builder.add(pb);
                    builder.identify(x, v + off_b);
                    return x;
                }
                let q = match side {
                    HandleSide::Correct => rim_a[i].1.lerp(pb, t),
                    HandleSide::Opposite => {
                        let d = rim_a[i].1 - centre_a;
                        let (u, w) = (d.dot(e1), d.dot(e2));
                        let (st, ct) = (PI * t).sin_cos();
                        let rad = e2 * ct + axis * st;
                        centre_a + axis_vec * t + e1 * u + rad * w
                    }
                };
                builder.add(q)
            })
            .collect();
        for i in 0..n {
            let i1 = (i + 1) % n;
            builder.tri(prev[i], prev[i1], row[i1]);
            builder.tri(prev[i], row[i1], row[i]);
        }
        prev = row;
    }
    let tube_tris = builder.tris.len() - first_tube;
    let out = match a.ambient {
        Ambient::Euclidean3 => builder.finish()?,
        _ => builder.finish_torus(a.ambient.clone())?,
    };
    if out.component_count() != 1 {
        return Err(Error::Surgery("result is not connected".into()));
    }
    if side == HandleSide::Correct {
        let t0 = out.triangle_count() - tube_tris;
        let hit = self_intersections(&out).into_iter().any(|(i, j)| (i >= t0) != (j >= t0));
        if hit {
            return Err(Error::Surgery("tube collides with the surfaces".into()));
        }
    }
    Ok(out)
}

/// Centres and height for the handle surgery at the balance height.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurgeryLayout {
    pub c0: f64,
    /// Disk centre on the slice at height `c0`.
    pub slice_centre: Point3,
    /// Disk centre on the base of the cup.
    pub cup_centre: Point3,
    pub radius: f64,
    /// Half-size of the polar patch cell blocks.
    pub patch_half: f64,
}

impl SurgeryLayout {
    /// Tube end on the cup for the given side: one period up for the
    /// straight route through the top of the torus.
    pub fn cup_end(&self, p: &ExampleIIParams, side: HandleSide) -> Point3 {
        match side {
            HandleSide::Correct => self.cup_centre + Point3::new(0.0, 0.0, p.h),
            HandleSide::Opposite => self.cup_centre,
        }
    }

    pub fn tube_length(&self, p: &ExampleIIParams) -> f64 {
        4.0 * p.h / 3.0 - self.c0
    }

    pub fn patch(&self, centre: Point3) -> PolarPatch {
        PolarPatch { cx: centre.x, cy: centre.y, radius: self.radius, half: self.patch_half, segments: RIM_SEGMENTS }
    }
}

/// Places both disks above one another at `x = 1 - delta - sigma/2`,
/// `y = 1/2` and checks that they fit: the slice disk must clear the box
/// cross-section at `c0`, the cup disk must lie inside the base.
pub fn surgery_layout(p: &ExampleIIParams, variant: DcVariant) -> Result<SurgeryLayout> {
    p.validate_shape()?;
    let c0 = solve_c0(p.delta, p.h, p.theta0, variant)?;
    let x = 1.0 - p.delta - p.sigma() / 2.0;
    let slice_room = x - (1.0 - p.delta - p.shift_at(c0)) - p.eps;
    let cup_room = p.sigma() / 2.0 - p.eps;
    let room = slice_room.min(cup_room).min(0.5 - p.delta - p.eps);
    if !(room > 0.0) {
        return Err(Error::Surgery(format!(
            "surgery disk of radius {} does not fit (slice clearance {slice_room:.3e}, cup clearance {cup_room:.3e})",
            p.eps
        )));
    }
    Ok(SurgeryLayout {
        c0,
        slice_centre: Point3::new(x, 0.5, c0),
        cup_centre: Point3::new(x, 0.5, p.h / 3.0),
        radius: p.eps,
        patch_half: p.eps + 0.5 * room,
    })
}

/// Slice and cup at the balance height, each with a polar patch at the
/// surgery centre.
pub fn surgery_inputs(p: &ExampleIIParams, layout: &SurgeryLayout, res: f64) -> Result<(TriSurfaceMesh, TriSurfaceMesh)> {
    let s = sigma_c_mesh_at(p, layout.c0, res, Some(&layout.patch(layout.slice_centre)))?;
    let d = dc_mesh_at(p, layout.c0, res, Some(&layout.patch(layout.cup_centre)))?;
    Ok((s, d))
}

/// Area of the regular `n`-gon of circumradius `r`.
pub fn rim_polygon_area(r: f64, n: usize) -> f64 {
    0.5 * n as f64 * r * r * (2.0 * PI / n as f64).sin()
}

/// Lateral area of the straight prism over that polygon.
pub fn rim_prism_area(r: f64, n: usize, length: f64) -> f64 {
    n as f64 * 2.0 * r * (PI / n as f64).sin() * length
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ledger::{disk_dc_area, sigma_c_area};

    fn cot7() -> ExampleIIParams {
        ExampleIIParams { h: 0.012, delta: 0.15, theta0: (1.0f64 / 7.0).atan(), eps: 0.013, c: 0.005 }
    }

    #[test]
    fn box_corners() {
        let p = cot7();
        assert!((p.sigma() - 0.028).abs() < 1e-12);
        let b = build_parallelepiped(&p).unwrap();
        let a1 = b.base[0];
        let b1 = b.top[0];
        assert!(a1.dist(Point3::new(0.15, 0.15, 0.004)) < 1e-15);
        assert!(b1.dist(Point3::new(0.15 - 0.028, 0.15, 0.008)) < 1e-12);
        for i in 0..4 {
            assert!((b.top[i] - b.base[i]).dist(Point3::new(-0.028, 0.0, 0.004)) < 1e-12);
        }
        let lateral = (b.top[0] - b.base[0]).norm();
        assert!((lateral - 0.004 / p.theta0.sin()).abs() < 1e-12);
    }

    #[test]
    fn params_report_failed_inequality() {
        let p = ExampleIIParams { eps: 0.012, ..Default::default() };
        let e = p.validate().unwrap_err().to_string();
        assert!(e.contains("h < eps"), "{e}");
    }

    #[test]
    fn gamma_shape_and_perimeter() {
        let p = ExampleIIParams::default();
        let x = p.side();
        for c in [p.h / 3.0, 0.005, 0.007, 2.0 * p.h / 3.0] {
            let g = gamma_at(&p, c).unwrap();
            assert!((g.length() - 4.0 * x).abs() < 1e-12);
        }
        let bottom = gamma_at(&p, p.h / 3.0).unwrap();
        assert!(bottom.vertices()[0].dist(Point3::new(p.delta, p.delta, p.h / 3.0)) < 1e-15);
        let top = gamma_at(&p, 2.0 * p.h / 3.0).unwrap();
        let b = build_parallelepiped(&p).unwrap();
        assert!(top.vertices()[0].dist(b.top[0]) < 1e-12);
        assert!(gamma_at(&p, p.h).is_err());
    }

    #[test]
    fn flat_meshes_match_ledger() {
        let p = ExampleIIParams::default();
        let s = build_sigma_c_mesh(&p, 0.05).unwrap();
        assert!((s.area() - sigma_c_area(p.delta)).abs() < 1e-10);
        let d = build_dc_mesh(&p, 0.05).unwrap();
        let want = disk_dc_area(p.delta, p.h, p.theta0, p.c, DcVariant::Exact);
        assert!((d.area() - want).abs() < 1e-10, "{} vs {want}", d.area());
        let g = build_gamma_c(&p).unwrap();
        assert_eq!(boundary_multiplicity(&s, &g, 1e-9).unwrap(), 1);
        assert_eq!(boundary_multiplicity(&d, &g, 1e-9).unwrap(), 1);
        assert_eq!(s.euler_characteristic(), -1);
        assert_eq!(d.euler_characteristic(), 1);
    }

    #[test]
    fn surgery_adds_or_cancels_boundaries() {
        let p = ExampleIIParams::default();
        let lay = surgery_layout(&p, DcVariant::Exact).unwrap();
        let (s, d) = surgery_inputs(&p, &lay, 0.05).unwrap();
        assert!((s.area() - sigma_c_area(p.delta)).abs() < 1e-10, "{} vs {}", s.area(), sigma_c_area(p.delta));
        let g = gamma_at(&p, lay.c0).unwrap();
        let good = mesh_surgery(&s, &d, lay.slice_centre, lay.cup_end(&p, HandleSide::Correct), lay.radius, HandleSide::Correct).unwrap();
        assert!(good.is_coherently_oriented());
        assert_eq!(good.component_count(), 1);
        assert_eq!(good.euler_characteristic(), s.euler_characteristic() + d.euler_characteristic() - 2);
        assert_eq!(boundary_multiplicity(&good, &g, 1e-9).unwrap(), 2);
        let removed = 2.0 * rim_polygon_area(lay.radius, RIM_SEGMENTS);
        let tube = rim_prism_area(lay.radius, RIM_SEGMENTS, lay.tube_length(&p));
        let want = s.area() + d.area() - removed + tube;
        assert!((good.area() - want).abs() < 1e-12, "{} vs {want}", good.area());

        let bad = mesh_surgery(&s, &d, lay.slice_centre, lay.cup_end(&p, HandleSide::Opposite), lay.radius, HandleSide::Opposite).unwrap();
        assert!(bad.is_coherently_oriented());
        assert_eq!(boundary_multiplicity(&bad, &g, 1e-9).unwrap(), 0);
    }

    #[test]
    fn slanted_balance_height_leaves_no_room() {
        let p = ExampleIIParams::default();
        assert!(matches!(surgery_layout(&p, DcVariant::Slanted), Err(Error::Surgery(_))));
    }
}
