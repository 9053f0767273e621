use serde::{Deserialize, Serialize};

use super::vec3::{Point3, ShiftVec};
use crate::error::{Error, Result};

/// A parallelepiped with a horizontal, axis-aligned square-ish base and a
/// single lateral edge vector. Used as the excluded region of a flat torus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Parallelepiped {
    pub base: [Point3; 4],
    pub top: [Point3; 4],
}

impl Parallelepiped {
    /// Base corners in the order `(x0,y0) (x0,y1) (x1,y1) (x1,y0)` at height
    /// `z0`, lifted by `lateral`.
    pub fn from_base(x0: f64, x1: f64, y0: f64, y1: f64, z0: f64, lateral: Point3) -> Result<Self> {
        if !(x1 > x0 && y1 > y0) || lateral.z <= 0.0 {
            return Err(Error::InvalidParams(
                "parallelepiped needs x1 > x0, y1 > y0 and an upward lateral edge".into(),
            ));
        }
        let base = [
            Point3::new(x0, y0, z0),
            Point3::new(x0, y1, z0),
            Point3::new(x1, y1, z0),
            Point3::new(x1, y0, z0),
        ];
        let top = base.map(|p| p + lateral);
        Ok(Self { base, top })
    }

    pub fn lateral(&self) -> Point3 {
        self.top[0] - self.base[0]
    }

    fn x_range(&self) -> (f64, f64) {
        (self.base[0].x, self.base[2].x)
    }

    fn y_range(&self) -> (f64, f64) {
        (self.base[0].y, self.base[2].y)
    }

    fn z_range(&self) -> (f64, f64) {
        (self.base[0].z, self.top[0].z)
    }

    /// Horizontal offset of the cross-section at height `z` relative to the base.
    pub fn shear_at(&self, z: f64) -> (f64, f64) {
        let v = self.lateral();
        let t = (z - self.base[0].z) / v.z;
        (t * v.x, t * v.y)
    }

    /// Cross-section rectangle `[x0,x1] x [y0,y1]` at height `z`, if `z` is
    /// within the vertical extent.
    pub fn cross_section(&self, z: f64) -> Option<[f64; 4]> {
        let (z0, z1) = self.z_range();
        if z < z0 || z > z1 {
            return None;
        }
        let (dx, dy) = self.shear_at(z);
        let (x0, x1) = self.x_range();
        let (y0, y1) = self.y_range();
        Some([x0 + dx, x1 + dx, y0 + dy, y1 + dy])
    }

    /// Strict interior test with margin `tol`.
    pub fn contains(&self, p: Point3, tol: f64) -> bool {
        let (z0, z1) = self.z_range();
        if p.z <= z0 + tol || p.z >= z1 - tol {
            return false;
        }
        let [x0, x1, y0, y1] = self.cross_section(p.z).unwrap();
        p.x > x0 + tol && p.x < x1 - tol && p.y > y0 + tol && p.y < y1 - tol
    }

    /// Projects an interior point onto the nearest face. Points outside are
    /// returned unchanged.
    pub fn project_out(&self, p: Point3) -> Point3 {
        if !self.contains(p, 0.0) {
            return p;
        }
        let v = self.lateral();
        let (z0, z1) = self.z_range();
        let [x0, x1, y0, y1] = self.cross_section(p.z).unwrap();
        // slanted x-walls: unit normal of the plane spanned by e_y and v
        let nx = Point3::new(v.z, 0.0, -v.x).normalized();
        let ny = Point3::new(0.0, v.z, -v.y).normalized();
        let cands = [
            ((p.z - z0), Point3::new(0.0, 0.0, -(p.z - z0))),
            ((z1 - p.z), Point3::new(0.0, 0.0, z1 - p.z)),
            ((p.x - x0) * nx.x.abs(), -nx * ((p.x - x0) * nx.x.abs())),
            ((x1 - p.x) * nx.x.abs(), nx * ((x1 - p.x) * nx.x.abs())),
            ((p.y - y0) * ny.y.abs(), -ny * ((p.y - y0) * ny.y.abs())),
            ((y1 - p.y) * ny.y.abs(), ny * ((y1 - p.y) * ny.y.abs())),
        ];
        let (_, step) = cands
            .iter()
            .copied()
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .unwrap();
        p + step
    }

    pub fn corners(&self) -> Vec<Point3> {
        self.base.iter().chain(self.top.iter()).copied().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Ambient {
    Euclidean3,
    FlatTorus3 {
        periods: Point3,
        excluded: Option<Parallelepiped>,
    },
}

impl Default for Ambient {
    fn default() -> Self {
        Ambient::Euclidean3
    }
}

impl Ambient {
    pub fn torus(periods: Point3, excluded: Option<Parallelepiped>) -> Result<Self> {
        if !(periods.x > 0.0 && periods.y > 0.0 && periods.z > 0.0) {
            return Err(Error::InvalidParams("torus periods must be positive".into()));
        }
        if let Some(b) = &excluded {
            for c in b.corners() {
                let inside = (0..3).all(|i| c[i] >= 0.0 && c[i] <= periods[i]);
                if !inside {
                    return Err(Error::InvalidParams(
                        "excluded region must lie inside one fundamental domain".into(),
                    ));
                }
            }
        }
        Ok(Ambient::FlatTorus3 { periods, excluded })
    }

    pub fn is_torus(&self) -> bool {
        matches!(self, Ambient::FlatTorus3 { .. })
    }

    pub fn periods(&self) -> Option<Point3> {
        match self {
            Ambient::Euclidean3 => None,
            Ambient::FlatTorus3 { periods, .. } => Some(*periods),
        }
    }

    pub fn excluded(&self) -> Option<&Parallelepiped> {
        match self {
            Ambient::Euclidean3 => None,
            Ambient::FlatTorus3 { excluded, .. } => excluded.as_ref(),
        }
    }

    /// Wraps `p` into the fundamental domain, returning the wrapped point and
    /// the lattice count removed (`p = wrapped + k * periods`).
    pub fn wrap(&self, p: Point3) -> (Point3, ShiftVec) {
        match self {
            Ambient::Euclidean3 => (p, [0, 0, 0]),
            Ambient::FlatTorus3 { periods, .. } => {
                let mut out = p;
                let mut k = [0i32; 3];
                for i in 0..3 {
                    let l = periods[i];
                    let c = p[i];
                    let mut n = (c / l).floor();
                    let mut w = c - n * l;
                    // guard against w == l from rounding
                    if w >= l {
                        w -= l;
                        n += 1.0;
                    }
                    k[i] = n as i32;
                    match i {
                        0 => out.x = w,
                        1 => out.y = w,
                        _ => out.z = w,
                    }
                }
                (out, k)
            }
        }
    }

    /// Shortest displacement from `a` to `b` under the lattice identification.
    pub fn min_image(&self, a: Point3, b: Point3) -> Point3 {
        let d = b - a;
        match self {
            Ambient::Euclidean3 => d,
            Ambient::FlatTorus3 { periods, .. } => Point3::new(
                d.x - (d.x / periods.x).round() * periods.x,
                d.y - (d.y / periods.y).round() * periods.y,
                d.z - (d.z / periods.z).round() * periods.z,
            ),
        }
    }

    pub fn distance(&self, a: Point3, b: Point3) -> f64 {
        self.min_image(a, b).norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_roundtrip() {
        let amb = Ambient::torus(Point3::new(1.0, 1.0, 0.5), None).unwrap();
        let (w, k) = amb.wrap(Point3::new(1.25, -0.25, 1.1));
        assert!((w.x - 0.25).abs() < 1e-12 && (w.y - 0.75).abs() < 1e-12);
        assert!((w.z - 0.1).abs() < 1e-12);
        assert_eq!(k, [1, -1, 2]);
    }

    #[test]
    fn min_image_crosses_seam() {
        let amb = Ambient::torus(Point3::new(1.0, 1.0, 1.0), None).unwrap();
        let d = amb.min_image(Point3::new(0.9, 0.0, 0.0), Point3::new(0.1, 0.0, 0.0));
        assert!((d.x - 0.2).abs() < 1e-12);
    }

    #[test]
    fn sheared_box_projection_lands_on_a_face() {
        let b = Parallelepiped::from_base(0.2, 0.8, 0.2, 0.8, 0.1, Point3::new(-0.05, 0.0, 0.1))
            .unwrap();
        let p = Point3::new(0.5, 0.5, 0.19);
        assert!(b.contains(p, 0.0));
        let q = b.project_out(p);
        assert!(!b.contains(q, 1e-12));
        assert!((q.z - 0.2).abs() < 1e-12);
        let [x0, ..] = b.cross_section(0.15).unwrap();
        assert!((x0 - 0.175).abs() < 1e-12);
    }

    #[test]
    fn excluded_region_must_fit() {
        let b = Parallelepiped::from_base(0.2, 1.2, 0.2, 0.8, 0.1, Point3::new(0.0, 0.0, 0.1))
            .unwrap();
        assert!(Ambient::torus(Point3::new(1.0, 1.0, 1.0), Some(b)).is_err());
    }
}
