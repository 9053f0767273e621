//! Example I: the strip disk against the bridged pair of embedded disks.

use std::collections::BTreeMap;

use super::config::ExampleIConfig;
use super::{tagged, Check, ExampleId, ExampleReport, Outcome};
use crate::constructions::{build_bridged_curve, build_ehat_mesh, build_sigmahat_init, ExampleIParams};
use crate::error::{Error, Result};
use crate::geom::{hausdorff_distance, self_intersections};
use crate::ledger::{ehat_area, eps_threshold, ledger_entry, sigma_hat_area};
use crate::solver::minimize_area;

fn inputs(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn monotone(h: &[f64]) -> bool {
    h.windows(2).all(|w| w[1] <= w[0])
}

/// Per strip width: ledger order, a solve from the strip disk (must end
/// below it and self-intersect), a solve from the bridged pair (must stay
/// embedded and above the first minimizer), and the Hausdorff distance
/// between the first minimizer and its starting surface.
pub fn verify_example_i(cfg: &ExampleIConfig) -> Result<Outcome> {
    let c = cfg.c;
    let threshold = eps_threshold(c)?;
    if cfg.eps_sequence.is_empty() {
        return Err(Error::InvalidParams("eps_sequence is empty".into()));
    }
    if !cfg.eps_sequence.windows(2).all(|w| w[1] < w[0]) {
        return Err(Error::InvalidParams("eps_sequence must be strictly decreasing".into()));
    }
    if let Some(eps) = cfg.eps_sequence.iter().find(|&&e| !(e < threshold)) {
        return Err(Error::InvalidParams(format!("eps {eps} is not below the threshold {threshold} for C = {c}")));
    }
    if !(cfg.max_edge > 0.0 && cfg.sigmahat_edge > 0.0 && cfg.hausdorff_sample_ratio > 0.0) {
        return Err(Error::InvalidParams("mesh edges and sample ratio must be positive".into()));
    }
    cfg.solve.validate()?;

    let mut r = ExampleReport::new(ExampleId::I);
    r.param("C", c);
    r.param("eps_sequence", cfg.eps_sequence.clone());
    r.param("bridge_width", cfg.bridge_width);
    r.param("trim", cfg.trim);
    r.param("max_edge", cfg.max_edge);
    r.param("sigmahat_edge", cfg.sigmahat_edge);
    r.param("hausdorff_sample_ratio", cfg.hausdorff_sample_ratio);
    r.param("solve", serde_json::to_value(cfg.solve)?);
    r.ledger.push(ledger_entry("sigma_hat_area", &inputs(&[("C", c)]))?);
    r.ledger.push(ledger_entry("eps_threshold", &inputs(&[("C", c)]))?);
    let sigma_hat = sigma_hat_area(c);
    let mut out = Outcome::new(r);

    let mut hausdorff = Vec::new();
    let mut ratios = Vec::new();
    for &eps in &cfg.eps_sequence {
        let p = ExampleIParams { eps, c, bridge_width: cfg.bridge_width, trim: cfg.trim };
        p.validate()?;
        let ehat = ehat_area(eps, c);
        let r = &mut out.report;
        r.ledger.push(ledger_entry("ehat_area", &inputs(&[("eps", eps), ("C", c)]))?);
        r.ledger.push(ledger_entry("ehat_area_exact", &inputs(&[("eps", eps), ("C", c), ("trim", cfg.trim)]))?);
        r.checks.push(Check::lt(&tagged("a.ehat_below_sigma_hat", "eps", eps), ehat, sigma_hat));
        ratios.push(sigma_hat / ehat);

        let res = cfg.max_edge.min(eps);
        let start = build_ehat_mesh(&p, res)?;
        let (d, dr) = minimize_area(start.clone(), &cfg.solve)?;
        let d_crossings = self_intersections(&d).len();
        r.run(&tagged("D", "eps", eps), &dr);
        r.checks.push(Check::holds(&tagged("b.converged", "eps", eps), dr.converged));
        r.checks.push(Check::holds(&tagged("b.monotone", "eps", eps), monotone(&dr.area_history)));
        r.checks.push(Check::lt(&tagged("b.area_below_ehat_area", "eps", eps), dr.final_area, ehat));
        r.checks.push(Check::lt(&tagged("b.area_below_start", "eps", eps), dr.final_area, start.area()));
        r.checks.push(Check::int_ge(&tagged("b.self_intersections", "eps", eps), d_crossings as i64, 1));

        let s_start = build_sigmahat_init(&p, cfg.sigmahat_edge)?;
        let (s, sr) = minimize_area(s_start, &cfg.solve)?;
        let s_crossings = self_intersections(&s).len();
        r.run(&tagged("Sigma", "eps", eps), &sr);
        r.checks.push(Check::holds(&tagged("c.converged", "eps", eps), sr.converged));
        r.checks.push(Check::holds(&tagged("c.monotone", "eps", eps), monotone(&sr.area_history)));
        r.checks.push(Check::int_eq(&tagged("c.self_intersections", "eps", eps), s_crossings as i64, 0));
        r.checks.push(Check::near_rel(&tagged("c.area_near_sigma_hat", "eps", eps), sr.final_area, sigma_hat, 0.1));
        r.checks.push(Check::le(&tagged("c.sigma_hat_within_1.1", "eps", eps), sigma_hat, 1.1 * sr.final_area, 0.0));
        r.checks.push(Check::gt(&tagged("c.area_above_D", "eps", eps), sr.final_area, dr.final_area));

        hausdorff.push(hausdorff_distance(&d, &start, res * cfg.hausdorff_sample_ratio));

        out.curves(&format!("gamma_eps{eps}.obj"), &[build_bridged_curve(&p)?]);
        out.mesh(&format!("ehat_eps{eps}.obj"), &start);
        out.mesh(&format!("D_eps{eps}.obj"), &d);
        out.mesh(&format!("sigmahat_eps{eps}.obj"), &s);
    }
    let r = &mut out.report;
    r.checks.push(Check::non_increasing("d.hausdorff_non_increasing", &hausdorff, 0.0));
    r.checks.push(Check::increasing("ratio_grows_as_eps_shrinks", &ratios));
    Ok(out.finish())
}
