//! Clamped cotangent Laplacian on the free vertices and a Jacobi
//! preconditioned conjugate gradient solver.

use crate::geom::{Point3, TriSurfaceMesh};

const WEIGHT_MIN: f64 = 1e-3;
const WEIGHT_MAX: f64 = 1e3;

/// Symmetric sparse matrix in compressed rows.
#[derive(Debug, Clone)]
pub(crate) struct Csr {
    pub n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    diag: Vec<f64>,
}

impl Csr {
    fn mul(&self, x: &[f64], out: &mut [f64]) {
        for i in 0..self.n {
            let mut s = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.vals[k] * x[self.cols[k]];
            }
            out[i] = s;
        }
    }
}

/// Index of each free vertex in the reduced system.
pub(crate) fn free_index(m: &TriSurfaceMesh) -> (Vec<Option<usize>>, usize) {
    let mut next = 0;
    let idx = m
        .boundary_fixed
        .iter()
        .map(|&f| {
            if f {
                None
            } else {
                next += 1;
                Some(next - 1)
            }
        })
        .collect();
    (idx, next)
}

fn cot(u: Point3, v: Point3) -> f64 {
    let c = u.cross(v).norm();
    if c <= 0.0 {
        return WEIGHT_MAX;
    }
    u.dot(v) / c
}

/// Cotangent Laplacian restricted to the free vertices (Dirichlet rows for
/// fixed vertices are dropped). Edge weights are clamped so the matrix stays
/// positive definite on poor triangles.
pub(crate) fn cot_laplacian(m: &TriSurfaceMesh, idx: &[Option<usize>], n: usize) -> Csr {
    let mut entries: Vec<(usize, usize, f64)> = Vec::with_capacity(m.triangle_count() * 3);
    for t in 0..m.triangle_count() {
        let tri = m.triangles[t];
        let e = [m.tri_edge(t, 0), m.tri_edge(t, 1), m.tri_edge(t, 2)];
        for k in 0..3 {
            // angle at corner k lies between -e[k+2] and e[k]
            let w = 0.5 * cot(e[k], -e[(k + 2) % 3]);
            let (a, b) = (tri[(k + 1) % 3], tri[(k + 2) % 3]);
            entries.push((a.min(b), a.max(b), w));
        }
    }
    entries.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
    let mut diag = vec![0.0; n];
    let mut off: Vec<(usize, usize, f64)> = Vec::new();
    let mut i = 0;
    while i < entries.len() {
        let (a, b) = (entries[i].0, entries[i].1);
        let mut w = 0.0;
        while i < entries.len() && entries[i].0 == a && entries[i].1 == b {
            w += entries[i].2;
            i += 1;
        }
        let w = w.clamp(WEIGHT_MIN, WEIGHT_MAX);
        if let Some(ia) = idx[a] {
            diag[ia] += w;
        }
        if let Some(ib) = idx[b] {
            diag[ib] += w;
        }
        if let (Some(ia), Some(ib)) = (idx[a], idx[b]) {
            if ia != ib {
                off.push((ia, ib, -w));
                off.push((ib, ia, -w));
            }
        }
    }
    // tiny shift keeps components without fixed vertices solvable
    let mean = if n > 0 { diag.iter().sum::<f64>() / n as f64 } else { 0.0 };
    for d in &mut diag {
        *d += 1e-10 * mean;
    }
    off.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
    let mut row_ptr = vec![0; n + 1];
    let mut cols = Vec::with_capacity(off.len() + n);
    let mut vals = Vec::with_capacity(off.len() + n);
    let mut k = 0;
    for r in 0..n {
        cols.push(r);
        vals.push(diag[r]);
        while k < off.len() && off[k].0 == r {
            cols.push(off[k].1);
            vals.push(off[k].2);
            k += 1;
        }
        row_ptr[r + 1] = cols.len();
    }
    Csr { n, row_ptr, cols, vals, diag }
}

/// Solves `a x = b` by Jacobi preconditioned CG from `x = 0`.
pub(crate) fn pcg(a: &Csr, b: &[f64], rel_tol: f64, max_iters: usize) -> Vec<f64> {
    let n = a.n;
    let mut x = vec![0.0; n];
    let bnorm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    if bnorm == 0.0 {
        return x;
    }
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&a.diag).map(|(r, d)| r / d).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    for _ in 0..max_iters {
        a.mul(&p, &mut ap);
        let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        if pap <= 0.0 {
            break;
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rnorm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if rnorm <= rel_tol * bnorm {
            break;
        }
        for i in 0..n {
            z[i] = r[i] / a.diag[i];
        }
        let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    x
}

/// Descent direction `-L^{-1} g` on the free vertices; fixed vertices get zero.
pub(crate) fn sobolev_direction(m: &TriSurfaceMesh, g: &[Point3]) -> Vec<Point3> {
    let (idx, n) = free_index(m);
    let mut d = vec![Point3::ZERO; m.vertex_count()];
    if n == 0 {
        return d;
    }
    let l = cot_laplacian(m, &idx, n);
    for c in 0..3 {
        let mut b = vec![0.0; n];
        for (v, i) in idx.iter().enumerate() {
            if let Some(i) = i {
                b[*i] = -g[v][c];
            }
        }
        let x = pcg(&l, &b, 1e-3, 500);
        for (v, i) in idx.iter().enumerate() {
            if let Some(i) = i {
                d[v][c] = x[*i];
            }
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cg_solves_a_small_spd_system() {
        // path graph Laplacian with both ends fixed
        let n = 4;
        let mut row_ptr = vec![0];
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for r in 0..n {
            for c in 0..n {
                let w: f64 = if r == c { 2.0 } else if (r as i64 - c as i64).abs() == 1 { -1.0 } else { 0.0 };
                if w != 0.0 {
                    cols.push(c);
                    vals.push(w);
                }
            }
            row_ptr.push(cols.len());
        }
        let a = Csr { n, row_ptr, cols, vals, diag: vec![2.0; n] };
        let b = vec![1.0, 0.0, 0.0, 1.0];
        let x = pcg(&a, &b, 1e-14, 100);
        for xi in x {
            assert!((xi - 1.0).abs() < 1e-12);
        }
    }
}
