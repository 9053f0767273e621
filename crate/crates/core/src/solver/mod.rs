//! Discrete Plateau solver: minimizes total mesh area over the free
//! vertices, in Euclidean space or on a flat torus.

mod descent;
mod flips;
mod gradient;
mod init;
mod laplacian;

pub use descent::{minimize, minimize_area, minimize_area_torus, Preconditioner, SolveOptions, SolveReport};
pub use flips::improve_pass;
pub use gradient::{area_gradient, area_gradient_with_stats, max_norm};
pub use init::{cone_disk, triangulate_disk};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::example1::build_tau;
    use crate::constructions::example2::{build_sigma_c_mesh, ExampleIIParams};
    use crate::geom::Point3;
    use crate::ledger::sigma_c_area;

    #[test]
    fn cone_flattens_to_the_square() {
        let tau = build_tau(1.0);
        let m = cone_disk(&tau, Point3::new(0.0, 0.0, 1.0), 0.1).unwrap();
        let fixed: Vec<Point3> = m.vertices.iter().zip(&m.boundary_fixed).filter(|(_, f)| **f).map(|(p, _)| *p).collect();
        let (out, rep) = minimize_area(m, &SolveOptions::default()).unwrap();
        assert!(rep.converged, "{rep:?}");
        assert!(rep.final_area <= 4.0 + 1e-3);
        assert!(out.vertices.iter().all(|p| p.z.abs() <= 1e-4));
        assert!(rep.area_history.windows(2).all(|w| w[1] <= w[0]));
        let after: Vec<Point3> = out.vertices.iter().zip(&out.boundary_fixed).filter(|(_, f)| **f).map(|(p, _)| *p).collect();
        assert_eq!(fixed, after);
    }

    #[test]
    fn flat_torus_slice_needs_no_steps() {
        let p = ExampleIIParams::default();
        let m = build_sigma_c_mesh(&p, 0.05).unwrap();
        let (_, rep) = minimize_area_torus(m, &SolveOptions { grad_tol: 1e-10, ..Default::default() }).unwrap();
        assert!(rep.converged);
        assert_eq!(rep.iters, 0);
    }

    #[test]
    fn jittered_torus_slice_returns_flat() {
        let p = ExampleIIParams::default();
        let m = build_sigma_c_mesh(&p, 0.05).unwrap();
        let opts = SolveOptions { jitter: 0.1 * p.h, seed: 7, max_iters: 500, ..Default::default() };
        let (out, rep) = minimize_area_torus(m, &opts).unwrap();
        assert!(rep.area_history[0] > sigma_c_area(p.delta));
        assert!((rep.final_area - sigma_c_area(p.delta)).abs() <= 5e-3 * sigma_c_area(p.delta), "{rep:?}");
        out.validate().unwrap();
    }

    #[test]
    fn plain_gradient_also_descends() {
        let tau = build_tau(1.0);
        let m = cone_disk(&tau, Point3::new(0.0, 0.0, 0.5), 0.25).unwrap();
        let opts = SolveOptions { preconditioner: Preconditioner::None, max_iters: 200, ..Default::default() };
        let (_, rep) = minimize_area(m, &opts).unwrap();
        assert!(rep.final_area < rep.area_history[0]);
        assert!(rep.area_history.windows(2).all(|w| w[1] <= w[0]));
    }
}
