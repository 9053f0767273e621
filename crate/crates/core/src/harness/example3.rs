//! Examples III-A (catenoid annuli over sphere circles) and III-B (two
//! slices of the cube-punctured torus).

use std::collections::BTreeMap;
use std::f64::consts::PI;

use super::config::{ExampleIIIAConfig, ExampleIIIBConfig};
use super::{tagged, Check, ExampleId, ExampleReport, Outcome};
use crate::constructions::{build_iiib_surfaces, build_sphere_circles, frustum_mesh, slant_slice_area, SPHERE_CIRCLE_HEIGHTS};
use crate::error::{Error, Result};
use crate::geom::{surface_intersection, Point3};
use crate::ledger::{catenoid_area, catenoid_fit, iiib_threshold_check, ledger_entry, sigma_c_area, IIIB_DELTA_LIMIT};
use crate::solver::{minimize_area, minimize_area_torus, SolveOptions};

fn monotone(h: &[f64]) -> bool {
    h.windows(2).all(|w| w[1] <= w[0])
}

fn sphere_radius(z: f64) -> f64 {
    (1.0 - z * z).sqrt()
}

/// Catenoid fits for both circle pairs, the annulus-against-disks
/// comparison, a solve from a frustum over the first pair, and the
/// intersection of the first annulus with its mirror image (the annulus
/// over the second pair).
pub fn verify_example_iiia(cfg: &ExampleIIIAConfig) -> Result<Outcome> {
    if !(cfg.target_edge > 0.0 && cfg.plane_tol > 0.0 && cfg.radius_tol > 0.0) {
        return Err(Error::InvalidParams("target_edge and tolerances must be positive".into()));
    }
    cfg.solve.validate()?;
    let mut r = ExampleReport::new(ExampleId::IIIA);
    r.param("circle_heights", SPHERE_CIRCLE_HEIGHTS.to_vec());
    r.param("target_edge", cfg.target_edge);
    r.param("plane_tol", cfg.plane_tol);
    r.param("radius_tol", cfg.radius_tol);
    r.param("solve", serde_json::to_value(cfg.solve)?);

    // (a) one fit per circle pair
    let mut fits = Vec::new();
    for (k, pair) in SPHERE_CIRCLE_HEIGHTS.chunks(2).enumerate() {
        let (z1, z2) = (pair[0], pair[1]);
        let (r1, r2) = (sphere_radius(z1), sphere_radius(z2));
        let fit = catenoid_fit(r1, z1, r2, z2)?;
        let inputs: BTreeMap<String, f64> =
            [("r1", r1), ("z1", z1), ("r2", r2), ("z2", z2)].iter().map(|(k, v)| (k.to_string(), *v)).collect();
        for name in ["catenoid_a", "catenoid_b", "catenoid_area"] {
            r.ledger.push(ledger_entry(name, &inputs)?);
        }
        r.checks.push(Check::le(&format!("a.fit_residual[pair={}]", k + 1), fit.residual(), 0.0, 1e-10));
        fits.push(fit);
    }
    let fit = fits[0];

    // (b) annulus beats the two disks
    let (r1, r2) = (fit.r1, fit.r2);
    let disks = PI * (r1 * r1 + r2 * r2);
    let annulus = catenoid_area(&fit);
    r.checks.push(Check::near("b.disk_sum", disks, 1.95 * PI, 1e-12));
    r.checks.push(Check::lt("b.annulus_below_disks", annulus, disks));
    r.checks.push(Check::near("b.mirror_pair_same_area", catenoid_area(&fits[1]), annulus, 1e-12));

    // (c) solver annulus
    let n = (2.0 * PI * r1.max(r2) / cfg.target_edge).ceil() as usize;
    let start = frustum_mesh(r1, fit.z1, r2, fit.z2, cfg.target_edge, n)?;
    let (a1, rep) = minimize_area(start, &cfg.solve)?;
    r.run("A1", &rep);
    r.checks.push(Check::holds("c.converged", rep.converged));
    r.checks.push(Check::holds("c.monotone", monotone(&rep.area_history)));
    r.checks.push(Check::near_rel("c.area_matches_catenoid", rep.final_area, annulus, 0.01));

    // (d) the mirror annulus meets the first one on the mirror plane
    let a2 = a1.map_vertices(|p| Point3::new(p.x, p.y, -p.z)).flipped();
    let loops = surface_intersection(&a1, &a2);
    let closed = loops.iter().filter(|l| l.closed).count();
    r.checks.push(Check::int_eq("d.loop_count", loops.len() as i64, 1));
    r.checks.push(Check::int_eq("d.closed_loops", closed as i64, 1));
    let pts: Vec<Point3> = loops.iter().flat_map(|l| l.points.iter().copied()).collect();
    let height = pts.iter().map(|p| p.z.abs()).fold(0.0, f64::max);
    let waist = fit.radius_at(0.0);
    let radius_dev = pts.iter().map(|p| (p.x.hypot(p.y) - waist).abs()).fold(0.0, f64::max);
    r.checks.push(Check::le("d.loop_in_plane", height, 0.0, cfg.plane_tol));
    r.checks.push(Check::le("d.loop_radius", radius_dev, 0.0, cfg.radius_tol));

    let mut out = Outcome::new(r);
    let circles = build_sphere_circles(n)?;
    out.curves("circles.obj", &circles);
    out.mesh("A1.obj", &a1);
    out.mesh("A2.obj", &a2);
    Ok(out.finish())
}

/// Number of curves the slanted slice cuts out of the cube boundary.
fn expected_alpha_components(delta: f64, d: f64) -> usize {
    if d < 2.0 * delta || d > 1.0 - 2.0 * delta {
        1
    } else {
        2
    }
}

/// Threshold regime, disjointness of the cross-section curve from the
/// slanted-slice curves, the intersection line of the two slices, the
/// component count of the slanted-slice curves, and relaxations of both
/// slices from a perturbed start.
pub fn verify_example_iiib(cfg: &ExampleIIIBConfig) -> Result<Outcome> {
    let p = cfg.params;
    p.validate()?;
    if !(cfg.target_edge > 0.0 && cfg.line_tol > 0.0 && cfg.jitter >= 0.0) {
        return Err(Error::InvalidParams("target_edge and line_tol must be positive, jitter non-negative".into()));
    }
    cfg.solve.validate()?;
    let mut r = ExampleReport::new(ExampleId::IIIB);
    r.param("params", serde_json::to_value(p)?);
    r.param("target_edge", cfg.target_edge);
    r.param("line_tol", cfg.line_tol);
    r.param("jitter", cfg.jitter);
    r.param("solve", serde_json::to_value(cfg.solve)?);
    let delta_in: BTreeMap<String, f64> = [("delta".to_string(), p.delta)].into();
    for name in ["iiib_disk_area", "iiib_slice_area"] {
        r.ledger.push(ledger_entry(name, &delta_in)?);
    }

    // (a) the slice beats the cross-section disk
    let th = iiib_threshold_check(p.delta);
    r.param("regime", if th.slice_minimizes { "slice minimizing" } else { "disk minimizing" });
    r.checks.push(Check::lt("a.delta_below_limit", p.delta, IIIB_DELTA_LIMIT));
    r.checks.push(Check::holds("a.slice_minimizes", th.slice_minimizes));

    let (sigma, slant, gamma, alphas) = build_iiib_surfaces(&p, cfg.target_edge)?;
    let slant_exact = slant_slice_area(&p);
    r.checks.push(Check::near("mesh.slice_area", sigma.area(), sigma_c_area(p.delta), 1e-10));
    r.checks.push(Check::near("mesh.slant_area", slant.area(), slant_exact, 1e-10));

    // (b) curves apart
    let gap = alphas.iter().map(|a| gamma.min_distance(a)).fold(f64::INFINITY, f64::min);
    r.checks.push(Check::gt("b.curve_distance", gap, 0.0));

    // (c) the slices meet in one closed line at y = d - c, z = c
    let loops = surface_intersection(&sigma, &slant);
    r.checks.push(Check::int_eq("c.loop_count", loops.len() as i64, 1));
    r.checks.push(Check::int_eq("c.closed_loops", loops.iter().filter(|l| l.closed).count() as i64, 1));
    let y_line = (p.d - p.c).rem_euclid(1.0);
    let pts: Vec<Point3> = loops.iter().flat_map(|l| l.points.iter().copied()).collect();
    let dev_y = pts.iter().map(|q| ((q.y - y_line) + 0.5).rem_euclid(1.0) - 0.5).map(f64::abs).fold(0.0, f64::max);
    let dev_z = pts.iter().map(|q| ((q.z - p.c) + 0.5).rem_euclid(1.0) - 0.5).map(f64::abs).fold(0.0, f64::max);
    r.checks.push(Check::le("c.line_y_deviation", dev_y, 0.0, cfg.line_tol));
    r.checks.push(Check::le("c.line_z_deviation", dev_z, 0.0, cfg.line_tol));
    r.param("line_y", y_line);
    r.param("line_z", p.c);

    // (d) one or two curves depending on d
    r.checks.push(Check::int_eq(
        "d.alpha_components",
        alphas.len() as i64,
        expected_alpha_components(p.delta, p.d) as i64,
    ));

    // relaxations
    let opts = SolveOptions { jitter: cfg.jitter, ..cfg.solve };
    let mut relaxed = Vec::new();
    for (label, m, exact) in [("Sigma_c", &sigma, sigma_c_area(p.delta)), ("S_d", &slant, slant_exact)] {
        let (out, rep) = minimize_area_torus(m.clone(), &opts)?;
        r.run(&tagged(label, "jitter", cfg.jitter), &rep);
        r.checks.push(Check::holds(&format!("relax.converged[{label}]"), rep.converged));
        r.checks.push(Check::holds(&format!("relax.monotone[{label}]"), monotone(&rep.area_history)));
        r.checks.push(Check::near_rel(&format!("relax.area[{label}]"), rep.final_area, exact, 0.005));
        relaxed.push(out);
    }

    let mut out = Outcome::new(r);
    out.curves("gamma_c.obj", &[gamma]);
    out.curves("alpha_d.obj", &alphas);
    out.mesh("sigma_c.obj", &sigma);
    out.mesh("s_d.obj", &slant);
    out.mesh("sigma_c_relaxed.obj", &relaxed[0]);
    out.mesh("s_d_relaxed.obj", &relaxed[1]);
    Ok(out.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{slant_hole_intervals, ExampleIIIBParams};

    #[test]
    fn component_rule_matches_the_holes() {
        for delta in [0.05, 0.1, 0.2] {
            for k in 0..40 {
                let d = k as f64 / 40.0 + 0.0123;
                if d >= 1.0 || (d - 2.0 * delta).abs() < 1e-3 || (d - (1.0 - 2.0 * delta)).abs() < 1e-3 {
                    continue;
                }
                let p = ExampleIIIBParams { delta, c: 0.5, d };
                assert_eq!(slant_hole_intervals(&p).len(), expected_alpha_components(delta, d), "delta {delta} d {d}");
            }
        }
    }
}
