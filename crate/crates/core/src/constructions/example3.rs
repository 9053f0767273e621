//! Unit flat torus with a centred cube removed (horizontal slice, slanted
//! slice and their curves) and the sphere circles with their catenoids.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::build::{nodes_with_breaks, segments, MeshBuilder};
use crate::error::{Error, Result};
use crate::geom::{boundary_multiplicity, Ambient, ClosedPolyline, Parallelepiped, Point3, TriSurfaceMesh};
use crate::ledger::CatenoidFit;

/// Default number of segments for circles.
pub const CIRCLE_SEGMENTS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExampleIIIBParams {
    /// Margin of the cube inside the unit torus.
    pub delta: f64,
    /// Height of the horizontal slice.
    pub c: f64,
    /// Offset of the slanted slice `y + z = d`.
    pub d: f64,
}

impl Default for ExampleIIIBParams {
    fn default() -> Self {
        Self { delta: 0.1, c: 0.15, d: 0.1 }
    }
}

impl ExampleIIIBParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.delta > 0.0
            && self.delta < 0.5
            && self.c > self.delta
            && self.c < 1.0 - self.delta
            && (0.0..1.0).contains(&self.d);
        if !ok {
            return Err(Error::InvalidParams(format!(
                "need 0 < delta < 1/2, delta < c < 1 - delta, 0 <= d < 1; got {self:?}"
            )));
        }
        Ok(())
    }

    /// Whether `d` lies in the range where the slanted slice meets the cube
    /// boundary in one curve.
    pub fn single_curve_regime(&self) -> bool {
        self.d < 2.0 * self.delta
    }
}

/// The unit torus with the cube `[delta, 1 - delta]^3` excluded.
pub fn example3b_ambient(p: &ExampleIIIBParams) -> Result<Ambient> {
    let (lo, hi) = (p.delta, 1.0 - p.delta);
    let cube = Parallelepiped::from_base(lo, hi, lo, hi, lo, Point3::new(0.0, 0.0, hi - lo))?;
    Ambient::torus(Point3::new(1.0, 1.0, 1.0), Some(cube))
}

fn in_cube_range(p: &ExampleIIIBParams, t: f64) -> bool {
    t > p.delta && t < 1.0 - p.delta
}

fn slant_z(p: &ExampleIIIBParams, y: f64) -> f64 {
    (p.d - y).rem_euclid(1.0)
}

/// Intervals of `y` where the slanted slice passes through the cube.
pub fn slant_hole_intervals(p: &ExampleIIIBParams) -> Vec<(f64, f64)> {
    let (lo, hi) = (p.delta, 1.0 - p.delta);
    let mut cuts = vec![lo, hi];
    for t in [p.d - lo, p.d - hi, p.d] {
        let y = t.rem_euclid(1.0);
        if y > lo && y < hi {
            cuts.push(y);
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let mut out: Vec<(f64, f64)> = Vec::new();
    for w in cuts.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        if in_cube_range(p, slant_z(p, mid)) {
            match out.last_mut() {
                Some(last) if (last.1 - w[0]).abs() < 1e-12 => last.1 = w[1],
                _ => out.push((w[0], w[1])),
            }
        }
    }
    out
}

/// The cube's horizontal cross-section boundary at height `c`.
pub fn build_gamma_c_iiib(p: &ExampleIIIBParams) -> Result<ClosedPolyline> {
    p.validate()?;
    let (lo, hi, c) = (p.delta, 1.0 - p.delta, p.c);
    ClosedPolyline::new(vec![
        Point3::new(lo, lo, c),
        Point3::new(hi, lo, c),
        Point3::new(hi, hi, c),
        Point3::new(lo, hi, c),
    ])
}

/// Curves where the slanted slice meets the cube boundary, one per hole.
pub fn build_alpha_d(p: &ExampleIIIBParams) -> Result<Vec<ClosedPolyline>> {
    p.validate()?;
    let (lo, hi) = (p.delta, 1.0 - p.delta);
    slant_hole_intervals(p)
        .into_iter()
        .map(|(y0, y1)| {
            // inside a hole the wrapped z is affine in y
            let ym = 0.5 * (y0 + y1);
            let zm = slant_z(p, ym);
            let z = |y: f64| zm - (y - ym);
            ClosedPolyline::new(vec![
                Point3::new(lo, y0, z(y0)),
                Point3::new(hi, y0, z(y0)),
                Point3::new(hi, y1, z(y1)),
                Point3::new(lo, y1, z(y1)),
            ])
        })
        .collect()
}

fn periodic_grid(
    b: &mut MeshBuilder,
    xs: &[f64],
    ys: &[f64],
    lift: impl Fn(f64, f64) -> Point3,
    hole: impl Fn(f64, f64) -> bool,
) {
    let rows: Vec<Vec<usize>> = ys.iter().map(|&y| b.add_row(xs.iter().map(|&x| lift(x, y)))).collect();
    for j in 0..ys.len() - 1 {
        for i in 0..xs.len() - 1 {
            if hole(0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1])) {
                continue;
            }
            let (a, c) = (&rows[j], &rows[j + 1]);
            b.tri(a[i], a[i + 1], c[i + 1]);
            b.tri(a[i], c[i + 1], c[i]);
        }
    }
    let (nx, ny) = (xs.len() - 1, ys.len() - 1);
    for row in &rows {
        b.identify(row[nx], row[0]);
    }
    for i in 0..=nx {
        b.identify(rows[ny][i], rows[0][i]);
    }
}

/// Horizontal slice minus the cube cross-section, slanted slice minus its
/// cube holes, the cross-section boundary and the hole boundaries.
pub fn build_iiib_surfaces(
    p: &ExampleIIIBParams,
    res: f64,
) -> Result<(TriSurfaceMesh, TriSurfaceMesh, ClosedPolyline, Vec<ClosedPolyline>)> {
    p.validate()?;
    if !(res > 0.0) {
        return Err(Error::InvalidParams("resolution must be positive".into()));
    }
    let amb = example3b_ambient(p)?;
    let (lo, hi) = (p.delta, 1.0 - p.delta);
    let gamma = build_gamma_c_iiib(p)?;
    let alphas = build_alpha_d(p)?;

    let xs = nodes_with_breaks(0.0, 1.0, res, &[lo, hi]);
    let mut b = MeshBuilder::new();
    periodic_grid(&mut b, &xs, &xs, |x, y| Point3::new(x, y, p.c), |x, y| in_cube_range(p, x) && in_cube_range(p, y));
    let sigma = b.finish_torus(amb.clone())?;
    let sigma = match boundary_multiplicity(&sigma, &gamma, 1e-9)? {
        k if k < 0 => sigma.flipped(),
        _ => sigma,
    };

    let holes = slant_hole_intervals(p);
    let mut ybreaks = vec![lo, hi, p.d.rem_euclid(1.0)];
    for &(a, c) in &holes {
        ybreaks.extend([a, c]);
    }
    let ys = nodes_with_breaks(0.0, 1.0, res, &ybreaks);
    let mut b = MeshBuilder::new();
    // lift z = d - y is continuous in y; the ambient wraps it
    periodic_grid(
        &mut b,
        &xs,
        &ys,
        |x, y| Point3::new(x, y, p.d - y),
        |x, y| in_cube_range(p, x) && holes.iter().any(|&(a, c)| y > a && y < c),
    );
    let slant = b.finish_torus(amb)?;
    Ok((sigma, slant, gamma, alphas))
}

/// Exact area of the slanted slice with its holes removed.
pub fn slant_slice_area(p: &ExampleIIIBParams) -> f64 {
    let holes: f64 = slant_hole_intervals(p).iter().map(|(a, c)| c - a).sum();
    std::f64::consts::SQRT_2 * (1.0 - (1.0 - 2.0 * p.delta) * holes)
}

/// Regular `n`-gon inscribed in the horizontal circle of radius `r` at
/// height `z`, counter-clockwise seen from above.
pub fn circle(r: f64, z: f64, n: usize) -> Result<ClosedPolyline> {
    if n < 3 || !(r > 0.0) {
        return Err(Error::InvalidParams("circle needs r > 0 and at least 3 segments".into()));
    }
    ClosedPolyline::new(
        (0..n)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / n as f64;
                Point3::new(r * t.cos(), r * t.sin(), z)
            })
            .collect(),
    )
}

/// Heights of the four circles on the unit sphere: the upper pair spans one
/// annulus, the lower pair is its mirror image.
pub const SPHERE_CIRCLE_HEIGHTS: [f64; 4] = [0.2, -0.1, 0.1, -0.2];

/// The four horizontal circles on the unit sphere, in the order
/// `(0.2, -0.1)` for the first annulus and `(0.1, -0.2)` for the second.
pub fn build_sphere_circles(n: usize) -> Result<[ClosedPolyline; 4]> {
    let mk = |z: f64| circle((1.0 - z * z).sqrt(), z, n);
    Ok([
        mk(SPHERE_CIRCLE_HEIGHTS[0])?,
        mk(SPHERE_CIRCLE_HEIGHTS[1])?,
        mk(SPHERE_CIRCLE_HEIGHTS[2])?,
        mk(SPHERE_CIRCLE_HEIGHTS[3])?,
    ])
}

/// Surface of revolution over `zs` with radius `radius(z)`, `n` vertices
/// per ring.
pub fn revolution_mesh(zs: &[f64], radius: impl Fn(f64) -> f64, n: usize) -> Result<TriSurfaceMesh> {
    if zs.len() < 2 || n < 3 {
        return Err(Error::InvalidParams("need two heights and three segments".into()));
    }
    let mut b = MeshBuilder::new();
    let rings: Vec<Vec<usize>> = zs
        .iter()
        .map(|&z| {
            let r = radius(z);
            b.add_row((0..n).map(|k| {
                let t = 2.0 * PI * k as f64 / n as f64;
                Point3::new(r * t.cos(), r * t.sin(), z)
            }))
        })
        .collect();
    for w in rings.windows(2) {
        for k in 0..n {
            let k1 = (k + 1) % n;
            b.tri(w[0][k], w[0][k1], w[1][k1]);
            b.tri(w[0][k], w[1][k1], w[1][k]);
        }
    }
    b.finish()
}

/// Catenoid band between the fit's two heights, with rings spaced at most
/// `dz` apart and always one ring at `z = 0` when it lies inside.
pub fn catenoid_mesh(fit: &CatenoidFit, dz: f64, n: usize) -> Result<TriSurfaceMesh> {
    let (lo, hi) = (fit.z1.min(fit.z2), fit.z1.max(fit.z2));
    let zs = nodes_with_breaks(lo, hi, dz, &[0.0]);
    revolution_mesh(&zs, |z| fit.radius_at(z), n)
}

/// Straight frustum between two coaxial horizontal circles, used as a
/// solver starting point; spacing along the generator at most `dz`.
pub fn frustum_mesh(r1: f64, z1: f64, r2: f64, z2: f64, dz: f64, n: usize) -> Result<TriSurfaceMesh> {
    let k = segments((z2 - z1).abs().max((r2 - r1).abs()), dz);
    let zs: Vec<f64> = (0..=k).map(|i| z1 + (z2 - z1) * i as f64 / k as f64).collect();
    revolution_mesh(&zs, |z| r1 + (r2 - r1) * (z - z1) / (z2 - z1), n)
}
