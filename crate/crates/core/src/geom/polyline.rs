use serde::{Deserialize, Serialize};

use super::ambient::Ambient;
use super::vec3::{Point3, ShiftVec, ZERO_SHIFT};
use crate::error::{Error, Result};

/// Ordered closed vertex loop; segment `i` runs from vertex `i` to vertex
/// `i + 1 (mod n)` and carries a lattice shift (zero in Euclidean space).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedPolyline {
    vertices: Vec<Point3>,
    shifts: Vec<ShiftVec>,
    #[serde(default)]
    periods: Option<Point3>,
}

const DISTINCT_TOL: f64 = 1e-12;

impl ClosedPolyline {
    pub fn new(vertices: Vec<Point3>) -> Result<Self> {
        let n = vertices.len();
        Self::with_shifts(vertices, vec![ZERO_SHIFT; n], None)
    }

    pub fn with_shifts(
        vertices: Vec<Point3>,
        shifts: Vec<ShiftVec>,
        periods: Option<Point3>,
    ) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::InvalidPolyline(format!("need at least 3 vertices, got {n}")));
        }
        if shifts.len() != n {
            return Err(Error::InvalidPolyline("one shift per segment required".into()));
        }
        if let Some(p) = vertices.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidPolyline(format!("non-finite vertex {p:?}")));
        }
        if periods.is_none() && shifts.iter().any(|s| *s != ZERO_SHIFT) {
            return Err(Error::InvalidPolyline("shifts require torus periods".into()));
        }
        let c = Self { vertices, shifts, periods };
        for i in 0..n {
            if c.segment(i).norm() <= DISTINCT_TOL {
                return Err(Error::InvalidPolyline(format!(
                    "consecutive vertices {i} and {} coincide",
                    (i + 1) % n
                )));
            }
        }
        Ok(c)
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn shifts(&self) -> &[ShiftVec] {
        &self.shifts
    }

    pub fn periods(&self) -> Option<Point3> {
        self.periods
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Shift-aware vector of segment `i`.
    pub fn segment(&self, i: usize) -> Point3 {
        let n = self.vertices.len();
        let a = self.vertices[i];
        let b = self.vertices[(i + 1) % n];
        match self.periods {
            Some(p) => b.shifted(self.shifts[i], p) - a,
            None => b - a,
        }
    }

    pub fn length(&self) -> f64 {
        (0..self.len()).map(|i| self.segment(i).norm()).sum()
    }

    /// Same trace, opposite direction.
    pub fn reversed(&self) -> Self {
        let n = self.len();
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        // new segment j goes from old vertex n-1-j to old vertex n-2-j,
        // i.e. old segment n-2-j reversed
        let shifts = (0..n)
            .map(|j| {
                let old = (2 * n - 2 - j) % n;
                let s = self.shifts[old];
                [-s[0], -s[1], -s[2]]
            })
            .collect();
        Self { vertices, shifts, periods: self.periods }
    }

    pub fn map_points(&self, f: impl Fn(Point3) -> Point3) -> Result<Self> {
        Self::with_shifts(self.vertices.iter().map(|p| f(*p)).collect(), self.shifts.clone(), self.periods)
    }

    fn ambient(&self) -> Ambient {
        match self.periods {
            Some(periods) => Ambient::FlatTorus3 { periods, excluded: None },
            None => Ambient::Euclidean3,
        }
    }

    /// Closest point on the trace: `(distance, arclength parameter)`.
    pub fn project(&self, p: Point3) -> (f64, f64) {
        let amb = self.ambient();
        let mut best = (f64::INFINITY, 0.0);
        let mut s0 = 0.0;
        for i in 0..self.len() {
            let a = self.vertices[i];
            let d = self.segment(i);
            let l2 = d.norm_sq();
            let ap = amb.min_image(a, p);
            let t = (ap.dot(d) / l2).clamp(0.0, 1.0);
            let dist = (ap - d * t).norm();
            if dist < best.0 {
                best = (dist, s0 + t * l2.sqrt());
            }
            s0 += l2.sqrt();
        }
        best
    }

    pub fn distance_to(&self, p: Point3) -> f64 {
        self.project(p).0
    }

    /// Uniformly resamples each segment so no piece exceeds `target`;
    /// original vertices are kept.
    pub fn resampled(&self, target: f64) -> Result<Self> {
        if !(target > 0.0) {
            return Err(Error::InvalidPolyline("resample length must be positive".into()));
        }
        let mut verts = Vec::new();
        let mut shifts = Vec::new();
        for i in 0..self.len() {
            let a = self.vertices[i];
            let d = self.segment(i);
            let k = (d.norm() / target).ceil().max(1.0) as usize;
            for j in 0..k {
                verts.push(a + d * (j as f64 / k as f64));
                shifts.push(if j + 1 == k { self.shifts[i] } else { ZERO_SHIFT });
            }
        }
        Self::with_shifts(verts, shifts, self.periods)
    }

    /// Minimum distance between the traces of two Euclidean polylines.
    pub fn min_distance(&self, other: &ClosedPolyline) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.len() {
            for j in 0..other.len() {
                let d = segment_segment_distance(
                    self.vertices[i],
                    self.vertices[i] + self.segment(i),
                    other.vertices[j],
                    other.vertices[j] + other.segment(j),
                );
                best = best.min(d);
            }
        }
        best
    }

    /// True when no two non-adjacent segments come within `tol`.
    pub fn is_simple(&self, tol: f64) -> bool {
        let n = self.len();
        for i in 0..n {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let d = segment_segment_distance(
                    self.vertices[i],
                    self.vertices[i] + self.segment(i),
                    self.vertices[j],
                    self.vertices[j] + self.segment(j),
                );
                if d <= tol {
                    return false;
                }
            }
        }
        true
    }
}

pub fn segment_segment_distance(p0: Point3, p1: Point3, q0: Point3, q1: Point3) -> f64 {
    let d1 = p1 - p0;
    let d2 = q1 - q0;
    let r = p0 - q0;
    let a = d1.norm_sq();
    let e = d2.norm_sq();
    let f = d2.dot(r);
    let (s, t);
    if a <= f64::EPSILON && e <= f64::EPSILON {
        return r.norm();
    }
    if a <= f64::EPSILON {
        s = 0.0;
        t = (f / e).clamp(0.0, 1.0);
    } else {
        let c = d1.dot(r);
        if e <= f64::EPSILON {
            t = 0.0;
            s = (-c / a).clamp(0.0, 1.0);
        } else {
            let b = d1.dot(d2);
            let denom = a * e - b * b;
            let mut s1 = if denom > 0.0 { ((b * f - c * e) / denom).clamp(0.0, 1.0) } else { 0.0 };
            let mut t1 = (b * s1 + f) / e;
            if t1 < 0.0 {
                t1 = 0.0;
                s1 = (-c / a).clamp(0.0, 1.0);
            } else if t1 > 1.0 {
                t1 = 1.0;
                s1 = ((b - c) / a).clamp(0.0, 1.0);
            }
            s = s1;
            t = t1;
        }
    }
    ((p0 + d1 * s) - (q0 + d2 * t)).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(side: f64) -> ClosedPolyline {
        let h = side / 2.0;
        ClosedPolyline::new(vec![
            Point3::new(-h, -h, 0.0),
            Point3::new(h, -h, 0.0),
            Point3::new(h, h, 0.0),
            Point3::new(-h, h, 0.0),
        ])
        .unwrap()
    }

    #[test]
    fn square_perimeter() {
        assert_eq!(square(2.0).length(), 8.0);
    }

    #[test]
    fn repeated_vertex_rejected() {
        let r = ClosedPolyline::new(vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
        ]);
        assert!(matches!(r, Err(Error::InvalidPolyline(_))));
    }

    #[test]
    fn torus_segment_uses_shift() {
        let c = ClosedPolyline::with_shifts(
            vec![Point3::new(0.0, 0.5, 0.0), Point3::new(0.5, 0.5, 0.0), Point3::new(0.5, 0.7, 0.0)],
            vec![[0, 0, 0], [0, 0, 0], [1, 0, 0]],
            Some(Point3::new(1.0, 1.0, 1.0)),
        )
        .unwrap();
        // last segment from (0.5,0.7) to (1.0,0.5) in the lift
        let s = c.segment(2);
        assert!((s.x - 0.5).abs() < 1e-12 && (s.y + 0.2).abs() < 1e-12);
    }

    #[test]
    fn reversal_keeps_length_and_trace() {
        let c = square(2.0).resampled(0.3).unwrap();
        let r = c.reversed();
        assert!((c.length() - r.length()).abs() < 1e-12);
        for p in r.vertices() {
            assert!(c.distance_to(*p) < 1e-12);
        }
    }

    #[test]
    fn projection_parameter() {
        let c = square(2.0);
        let (d, s) = c.project(Point3::new(0.0, -1.5, 0.0));
        assert!((d - 0.5).abs() < 1e-12);
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn simple_check() {
        assert!(square(1.0).is_simple(1e-9));
        let bow = ClosedPolyline::new(vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 1.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
        ])
        .unwrap();
        assert!(!bow.is_simple(1e-9));
    }
}
