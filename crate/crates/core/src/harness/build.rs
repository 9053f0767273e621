//! Construction artifacts (curves and unsolved surfaces) for each example.

use std::f64::consts::PI;

use super::config::ExampleConfig;
use super::{Artifact, ArtifactData};
use crate::constructions::{
    build_bridged_curve, build_dc_mesh, build_ehat_mesh, build_gamma_c, build_iiib_surfaces, build_sigma_c_mesh,
    build_sigmahat_init, build_sphere_circles, catenoid_mesh, frustum_mesh, ExampleIParams, SPHERE_CIRCLE_HEIGHTS,
};
use crate::error::Result;
use crate::geom::{ClosedPolyline, TriSurfaceMesh};
use crate::ledger::catenoid_fit;

fn mesh(file: String, m: TriSurfaceMesh) -> Artifact {
    Artifact { file, data: ArtifactData::Mesh(m) }
}

fn curves(file: String, c: Vec<ClosedPolyline>) -> Artifact {
    Artifact { file, data: ArtifactData::Curves(c) }
}

/// Boundary curves and starting surfaces of an example, without solving.
pub fn build_example(cfg: &ExampleConfig) -> Result<Vec<Artifact>> {
    let mut out = Vec::new();
    match cfg {
        ExampleConfig::I(c) => {
            for &eps in &c.eps_sequence {
                let p = ExampleIParams { eps, c: c.c, bridge_width: c.bridge_width, trim: c.trim };
                p.validate()?;
                out.push(curves(format!("gamma_eps{eps}.obj"), vec![build_bridged_curve(&p)?]));
                out.push(mesh(format!("ehat_eps{eps}.obj"), build_ehat_mesh(&p, c.max_edge.min(eps))?));
                out.push(mesh(format!("sigmahat_init_eps{eps}.obj"), build_sigmahat_init(&p, c.sigmahat_edge)?));
            }
        }
        ExampleConfig::II(c) => {
            let p = c.params;
            p.validate()?;
            out.push(curves("gamma_c.obj".into(), vec![build_gamma_c(&p)?]));
            out.push(mesh("sigma_c.obj".into(), build_sigma_c_mesh(&p, c.target_edge)?));
            out.push(mesh("d_c.obj".into(), build_dc_mesh(&p, c.target_edge)?));
        }
        ExampleConfig::IIIA(c) => {
            let r = |z: f64| (1.0 - z * z).sqrt();
            let n = (2.0 * PI / c.target_edge).ceil() as usize;
            out.push(curves("circles.obj".into(), build_sphere_circles(n)?.to_vec()));
            for (k, pair) in SPHERE_CIRCLE_HEIGHTS.chunks(2).enumerate() {
                let (z1, z2) = (pair[0], pair[1]);
                let fit = catenoid_fit(r(z1), z1, r(z2), z2)?;
                out.push(mesh(format!("catenoid_{}.obj", k + 1), catenoid_mesh(&fit, c.target_edge, n)?));
                out.push(mesh(format!("frustum_{}.obj", k + 1), frustum_mesh(r(z1), z1, r(z2), z2, c.target_edge, n)?));
            }
        }
        ExampleConfig::IIIB(c) => {
            let (sigma, slant, gamma, alphas) = build_iiib_surfaces(&c.params, c.target_edge)?;
            out.push(curves("gamma_c.obj".into(), vec![gamma]));
            out.push(curves("alpha_d.obj".into(), alphas));
            out.push(mesh("sigma_c.obj".into(), sigma));
            out.push(mesh("s_d.obj".into(), slant));
        }
    }
    Ok(out)
}
