//! Gradient descent on total area with backtracking line search.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::flips::improve_pass;
use super::gradient::{descent_gradient, max_norm};
use super::laplacian::sobolev_direction;
use crate::error::{Error, Result};
use crate::geom::{Point3, TriSurfaceMesh};

const ARMIJO: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preconditioner {
    /// Plain area gradient.
    None,
    /// Gradient smoothed by the inverse cotangent Laplacian.
    Sobolev,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolveOptions {
    pub max_iters: usize,
    /// Stop once the largest per-vertex gradient norm is at most this.
    pub grad_tol: f64,
    pub step_init: f64,
    /// The line search gives up below this step.
    pub min_step: f64,
    /// Edge-flip pass every this many iterations (0 disables flips).
    pub improve_every: usize,
    pub seed: u64,
    pub preconditioner: Preconditioner,
    /// Amplitude of a seeded uniform perturbation applied to the free
    /// vertices before solving.
    pub jitter: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            max_iters: 2000,
            grad_tol: 1e-8,
            step_init: 1.0,
            min_step: 1e-12,
            improve_every: 10,
            seed: 0,
            preconditioner: Preconditioner::Sobolev,
            jitter: 0.0,
        }
    }
}

impl SolveOptions {
    pub fn validate(&self) -> Result<()> {
        let ok = self.max_iters > 0
            && self.grad_tol > 0.0
            && self.step_init > 0.0
            && self.min_step > 0.0
            && self.min_step <= self.step_init
            && self.jitter >= 0.0
            && [self.grad_tol, self.step_init, self.min_step, self.jitter].iter().all(|v| v.is_finite());
        if !ok {
            return Err(Error::InvalidParams(format!("invalid solve options {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub converged: bool,
    /// Accepted descent steps.
    pub iters: usize,
    pub final_area: f64,
    pub final_grad_norm: f64,
    /// Area after the start and after every accepted step or flip pass.
    pub area_history: Vec<f64>,
    pub flips: usize,
    /// Triangles in the final mesh flat enough to be treated as collapsed.
    pub degenerate_triangles: usize,
    /// True when the line search gave up before the gradient tolerance.
    pub stalled: bool,
}

/// Positions moved by `t * dir`, wrapped back into the fundamental domain
/// (shifts updated) and pushed out of the excluded region.
fn moved(m: &TriSurfaceMesh, dir: &[Point3], t: f64) -> TriSurfaceMesh {
    let mut out = m.clone();
    let torus = m.ambient.is_torus();
    let mut k = vec![[0i32; 3]; m.vertex_count()];
    for v in 0..m.vertex_count() {
        if m.boundary_fixed[v] || dir[v] == Point3::ZERO {
            continue;
        }
        let p = m.vertices[v] + dir[v] * t;
        if torus {
            let (w, kv) = m.ambient.wrap(p);
            let w = match m.ambient.excluded() {
                Some(b) => b.project_out(w),
                None => w,
            };
            out.vertices[v] = w;
            k[v] = kv;
        } else {
            out.vertices[v] = p;
        }
    }
    if let Some(sh) = out.tri_shifts.as_mut() {
        for (tri, s) in m.triangles.iter().zip(sh.iter_mut()) {
            for e in 0..3 {
                let (a, b) = (tri[e], tri[(e + 1) % 3]);
                for c in 0..3 {
                    s[e][c] += k[b][c] - k[a][c];
                }
            }
        }
    }
    out
}

fn jittered(m: &TriSurfaceMesh, amount: f64, seed: u64) -> TriSurfaceMesh {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dir: Vec<Point3> = m
        .boundary_fixed
        .iter()
        .map(|&f| {
            let d = Point3::new(
                rng.gen_range(-amount..=amount),
                rng.gen_range(-amount..=amount),
                rng.gen_range(-amount..=amount),
            );
            if f {
                Point3::ZERO
            } else {
                d
            }
        })
        .collect();
    moved(m, &dir, 1.0)
}

fn dot(g: &[Point3], d: &[Point3]) -> f64 {
    g.iter().zip(d).map(|(a, b)| a.dot(*b)).sum()
}

/// Backtracking from `t`, refined by one quadratic interpolation step;
/// returns the accepted mesh, its area and step.
fn line_search(
    m: &TriSurfaceMesh,
    area: f64,
    dir: &[Point3],
    slope: f64,
    mut t: f64,
    min_step: f64,
) -> Option<(TriSurfaceMesh, f64, f64)> {
    while t >= min_step {
        let trial = moved(m, dir, t);
        let a = trial.area();
        if a.is_finite() && a <= area + ARMIJO * t * slope && a < area {
            // minimum of the parabola through (0, area) with this slope and (t, a)
            let curv = a - area - slope * t;
            if curv > 0.0 {
                let tq = (-slope * t * t / (2.0 * curv)).min(4.0 * t);
                if tq >= min_step && (tq - t).abs() > 0.1 * t {
                    let q = moved(m, dir, tq);
                    let aq = q.area();
                    if aq.is_finite() && aq < a {
                        return Some((q, aq, tq));
                    }
                }
            }
            return Some((trial, a, t));
        }
        t *= 0.5;
    }
    None
}

fn descend(mut m: TriSurfaceMesh, opts: &SolveOptions) -> Result<(TriSurfaceMesh, SolveReport)> {
    opts.validate()?;
    m.validate()?;
    if opts.jitter > 0.0 {
        m = jittered(&m, opts.jitter, opts.seed);
    }
    let mut area = m.area();
    let mut history = vec![area];
    let mut step = opts.step_init;
    let max_step = 16.0 * opts.step_init;
    let mut iters = 0;
    let mut flips = 0;
    let mut converged = false;
    let mut stalled = false;
    // previous gradient, preconditioned gradient and search direction
    let mut prev: Option<(Vec<Point3>, Vec<Point3>, Vec<Point3>)> = None;
    for it in 0..opts.max_iters {
        if opts.improve_every > 0 && it > 0 && it % opts.improve_every == 0 {
            let mut trial = m.clone();
            let n = improve_pass(&mut trial);
            if n > 0 {
                let a = trial.area();
                if a <= area {
                    m = trial;
                    area = a;
                    flips += n;
                    history.push(area);
                    prev = None;
                }
            }
        }
        let (g, _) = descent_gradient(&m);
        if max_norm(&g) <= opts.grad_tol {
            converged = true;
            break;
        }
        let z = match opts.preconditioner {
            Preconditioner::Sobolev => {
                let d = sobolev_direction(&m, &g);
                if dot(&g, &d) < 0.0 {
                    d
                } else {
                    g.iter().map(|v| -*v).collect()
                }
            }
            Preconditioner::None => g.iter().map(|v| -*v).collect(),
        };
        // Polak-Ribiere with restart, in the preconditioned metric
        let mut dir = z.clone();
        if let Some((g0, z0, d0)) = &prev {
            let num: f64 = g.iter().zip(g0).zip(&z).map(|((a, b), c)| (*b - *a).dot(*c)).sum();
            let den = -dot(g0, z0);
            let beta = if den > 0.0 { (num / den).max(0.0) } else { 0.0 };
            if beta > 0.0 {
                for (d, p) in dir.iter_mut().zip(d0) {
                    *d += *p * beta;
                }
                if dot(&g, &dir) >= 0.0 {
                    dir = z.clone();
                }
            }
        }
        let mut slope = dot(&g, &dir);
        let mut found = line_search(&m, area, &dir, slope, step, opts.min_step);
        if found.is_none() && dir != z {
            dir = z.clone();
            slope = dot(&g, &dir);
            found = line_search(&m, area, &dir, slope, opts.step_init, opts.min_step);
        }
        if found.is_none() && opts.preconditioner == Preconditioner::Sobolev {
            dir = g.iter().map(|v| -*v).collect();
            slope = dot(&g, &dir);
            found = line_search(&m, area, &dir, slope, opts.step_init, opts.min_step);
        }
        match found {
            Some((mm, a, t)) => {
                step = (2.0 * t).min(max_step);
                m = mm;
                area = a;
                history.push(area);
                iters += 1;
                prev = Some((g, z, dir));
            }
            None => {
                stalled = true;
                break;
            }
        }
    }
    let (g, degenerate_triangles) = descent_gradient(&m);
    let final_grad_norm = max_norm(&g);
    converged |= final_grad_norm <= opts.grad_tol;
    let report = SolveReport {
        converged,
        iters,
        final_area: area,
        final_grad_norm,
        area_history: history,
        flips,
        degenerate_triangles,
        stalled: stalled && !converged,
    };
    Ok((m, report))
}

/// Minimizes area over the free vertices of a Euclidean mesh.
pub fn minimize_area(m: TriSurfaceMesh, opts: &SolveOptions) -> Result<(TriSurfaceMesh, SolveReport)> {
    if m.ambient.is_torus() {
        return Err(Error::InvalidMesh("mesh lives on a torus; use minimize_area_torus".into()));
    }
    descend(m, opts)
}

/// Minimizes area on a flat torus: edge vectors follow the stored shifts,
/// moved vertices are re-wrapped and pushed out of the excluded region.
pub fn minimize_area_torus(m: TriSurfaceMesh, opts: &SolveOptions) -> Result<(TriSurfaceMesh, SolveReport)> {
    if !m.ambient.is_torus() {
        return Err(Error::InvalidMesh("mesh is Euclidean; use minimize_area".into()));
    }
    descend(m, opts)
}

/// Dispatches on the mesh's ambient.
pub fn minimize(m: TriSurfaceMesh, opts: &SolveOptions) -> Result<(TriSurfaceMesh, SolveReport)> {
    descend(m, opts)
}
