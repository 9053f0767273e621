//! Example II: handle surgery between the torus slice and the cup at the
//! balance height.

use std::collections::BTreeMap;

use super::config::ExampleIIConfig;
use super::{tagged, Check, ExampleId, ExampleReport, Outcome};
use crate::constructions::{
    build_sigma_c_mesh, gamma_at, mesh_surgery, surgery_inputs, surgery_layout, ExampleIIParams, HandleSide,
};
use crate::error::{Error, Result};
use crate::geom::boundary_multiplicity;
use crate::ledger::{disk_dc_area, ledger_entry, sigma_c_area, solve_c0, surgery_gain, DcVariant};
use crate::solver::{minimize_area_torus, SolveOptions};

/// Balance heights closer than this (relative to `h`) to an end of the
/// allowed range are flagged.
const END_TOL: f64 = 1e-9;

fn inputs(p: &ExampleIIParams, extra: &[(&str, f64)]) -> BTreeMap<String, f64> {
    let mut m: BTreeMap<String, f64> =
        [("delta", p.delta), ("h", p.h), ("theta0", p.theta0)].iter().map(|(k, v)| (k.to_string(), *v)).collect();
    m.extend(extra.iter().map(|(k, v)| (k.to_string(), *v)));
    m
}

/// Balance heights under both wall-area variants, flat meshes at the
/// balance height against the ledger, the two handle surgeries, and a
/// relaxation of a perturbed slice.
///
/// The surgery itself is carried out at the exact balance height, the only
/// one at which the meshed slice and cup have equal area; the other
/// variant enters through the ledger checks.
pub fn verify_example_ii(cfg: &ExampleIIConfig) -> Result<Outcome> {
    let p = cfg.params;
    p.validate()?;
    if !(cfg.target_edge > 0.0 && cfg.jitter_h >= 0.0) {
        return Err(Error::InvalidParams("target_edge must be positive and jitter_h non-negative".into()));
    }
    cfg.solve.validate()?;

    let mut r = ExampleReport::new(ExampleId::II);
    r.param("params", serde_json::to_value(p)?);
    r.param("target_edge", cfg.target_edge);
    r.param("jitter_h", cfg.jitter_h);
    r.param("solve", serde_json::to_value(cfg.solve)?);
    r.param("surgery_variant", DcVariant::Exact.name());
    let sigma = sigma_c_area(p.delta);
    r.ledger.push(ledger_entry("sigma_c_area", &[("delta".to_string(), p.delta)].into())?);

    // (a) balance heights
    let mut c0s = Vec::new();
    for variant in [DcVariant::Slanted, DcVariant::Exact] {
        let v = variant.name();
        let c0 = solve_c0(p.delta, p.h, p.theta0, variant)?;
        r.ledger.push(ledger_entry(&format!("solve_c0_{v}"), &inputs(&p, &[]))?);
        r.ledger.push(ledger_entry(&format!("disk_dc_area_{v}"), &inputs(&p, &[("c", c0)]))?);
        r.ledger.push(ledger_entry("surgery_gain", &[("eps", p.eps), ("h", p.h), ("c0", c0)].map(|(k, x)| (k.to_string(), x)).into())?);
        let residual = (disk_dc_area(p.delta, p.h, p.theta0, c0, variant) - sigma).abs();
        r.checks.push(Check::le(&format!("a.balance_residual[{v}]"), residual, 0.0, 1e-12));
        let interior = c0 > p.h / 3.0 + END_TOL * p.h && c0 < 2.0 * p.h / 3.0 - END_TOL * p.h;
        r.checks.push(Check::holds(&format!("a.c0_inside_range[{v}]"), interior));
        let gain = surgery_gain(p.eps, p.h, c0);
        r.checks.push(Check::gt(&format!("a.surgery_gain_positive[{v}]"), gain, 0.0));
        c0s.push(c0);
    }
    r.param("c0_slanted", c0s[0]);
    r.param("c0_exact", c0s[1]);
    let mut out = Outcome::new(r);

    let lay = match surgery_layout(&p, DcVariant::Exact) {
        Ok(l) => l,
        Err(e) => {
            out.report.param("surgery_error", e.to_string());
            out.report.checks.push(Check::holds("c.surgery_layout_fits", false));
            return Ok(out.finish());
        }
    };
    let c0 = lay.c0;
    let gain = surgery_gain(p.eps, p.h, c0);
    let gamma = gamma_at(&p, c0)?;

    // (b) flat meshes at the balance height
    let (s, d) = surgery_inputs(&p, &lay, cfg.target_edge)?;
    let r = &mut out.report;
    r.checks.push(Check::near("b.slice_area", s.area(), sigma, 1e-6));
    r.checks.push(Check::near("b.cup_area", d.area(), disk_dc_area(p.delta, p.h, p.theta0, c0, DcVariant::Exact), 1e-6));
    r.checks.push(Check::int_eq("b.slice_multiplicity", boundary_multiplicity(&s, &gamma, 1e-9)?, 1));
    r.checks.push(Check::int_eq("b.cup_multiplicity", boundary_multiplicity(&d, &gamma, 1e-9)?, 1));

    // (c) handle on the correct side
    let good = mesh_surgery(&s, &d, lay.slice_centre, lay.cup_end(&p, HandleSide::Correct), lay.radius, HandleSide::Correct)?;
    r.checks.push(Check::int_eq("c.connected", good.component_count() as i64, 1));
    r.checks.push(Check::holds("c.coherently_oriented", good.is_coherently_oriented()));
    r.checks.push(Check::int_eq("c.multiplicity", boundary_multiplicity(&good, &gamma, 1e-9)?, 2));
    r.checks.push(Check::lt("c.area_below_two_slices", good.area(), 2.0 * sigma - 0.9 * gain));

    // (d) handle on the opposite side
    let bad = mesh_surgery(&s, &d, lay.slice_centre, lay.cup_end(&p, HandleSide::Opposite), lay.radius, HandleSide::Opposite)?;
    r.checks.push(Check::holds("d.coherently_oriented", bad.is_coherently_oriented()));
    r.checks.push(Check::int_eq("d.multiplicity", boundary_multiplicity(&bad, &gamma, 1e-9)?, 0));

    // (e) twice the slice is not the least area with boundary twice the curve
    r.checks.push(Check::lt("e.decomposition_violated", good.area(), 2.0 * sigma));

    // relaxation of a perturbed slice
    let flat = build_sigma_c_mesh(&ExampleIIParams { c: c0, ..p }, cfg.target_edge)?;
    let opts = SolveOptions { jitter: cfg.jitter_h * p.h, ..cfg.solve };
    let (relaxed, rr) = minimize_area_torus(flat, &opts)?;
    r.run(&tagged("Sigma_c_jittered", "jitter", opts.jitter), &rr);
    r.checks.push(Check::holds("relax.converged", rr.converged));
    r.checks.push(Check::holds("relax.monotone", rr.area_history.windows(2).all(|w| w[1] <= w[0])));
    r.checks.push(Check::near_rel("relax.area", rr.final_area, sigma, 0.005));

    out.curves("gamma_c0.obj", &[gamma]);
    out.mesh("sigma_c0.obj", &s);
    out.mesh("d_c0.obj", &d);
    out.mesh("surgered_correct.obj", &good);
    out.mesh("surgered_opposite.obj", &bad);
    out.mesh("sigma_c0_relaxed.obj", &relaxed);
    Ok(out.finish())
}
