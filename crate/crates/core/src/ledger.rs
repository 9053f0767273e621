//! Closed-form areas, thresholds and root solves used as analytic oracles.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub name: String,
    pub value: f64,
    pub inputs: BTreeMap<String, f64>,
    pub formula_source: String,
}

impl LedgerEntry {
    pub fn new(name: &str, value: f64, inputs: &[(&str, f64)], formula: &str) -> Self {
        Self {
            name: name.to_string(),
            value,
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            formula_source: formula.to_string(),
        }
    }
}

fn tower(c: f64) -> f64 {
    c + (c * c + 1.0).sqrt()
}

/// Area estimate for the bridged pair of embedded disks.
pub fn sigma_hat_area(c: f64) -> f64 {
    2.0 * tower(c)
}

/// Area estimate for the square disk with its two thin strips.
pub fn ehat_area(eps: f64, c: f64) -> f64 {
    4.0 + 2.0 * eps * tower(c)
}

/// Exact area of the piecewise-flat square-plus-strips disk: strips of full
/// width `2 eps` along the three legs (lengths `C`, `2 sqrt(1+C^2)`, `C`),
/// each tip at the bridge shortened by `trim`.
pub fn ehat_area_exact(eps: f64, c: f64, trim: f64) -> f64 {
    4.0 + 4.0 * eps * tower(c) - 4.0 * eps * trim
}

/// Area of the flat disk spanning the hexagonal curve: the rectangle
/// `[eps,1] x [-1,1]` plus two triangles of area `C/2` in the plane `x = eps`.
pub fn hexagon_flat_disk_area(eps: f64, c: f64) -> f64 {
    2.0 * (1.0 - eps) + c
}

/// Crossover width below which the strip disk is smaller than the bridged pair.
pub fn eps_threshold(c: f64) -> Result<f64> {
    let t = 1.0 - 2.0 / tower(c);
    if t > 0.0 {
        Ok(t)
    } else {
        Err(Error::CTooSmall(t))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DcVariant {
    /// All four walls carry the slant factor `1/sin(theta0)`.
    Slanted,
    /// Only the two x-normal walls are slanted; the y-normal walls are
    /// sheared within their plane and keep area `x (c - h/3)`.
    Exact,
}

impl DcVariant {
    pub fn name(self) -> &'static str {
        match self {
            DcVariant::Slanted => "slanted",
            DcVariant::Exact => "exact",
        }
    }
}

/// Wall area per unit of height above `h/3`.
fn wall_rate(x: f64, theta0: f64, variant: DcVariant) -> f64 {
    match variant {
        DcVariant::Slanted => 4.0 * x / theta0.sin(),
        DcVariant::Exact => 2.0 * x / theta0.sin() + 2.0 * x,
    }
}

/// Area of the cup: bottom square of side `x = 1 - 2 delta` plus the walls
/// from `h/3` up to `c`.
pub fn disk_dc_area(delta: f64, h: f64, theta0: f64, c: f64, variant: DcVariant) -> f64 {
    let x = 1.0 - 2.0 * delta;
    x * x + wall_rate(x, theta0, variant) * (c - h / 3.0)
}

/// Area of a horizontal torus slice with the square hole of side `1 - 2 delta`.
pub fn sigma_c_area(delta: f64) -> f64 {
    let x = 1.0 - 2.0 * delta;
    1.0 - x * x
}

/// Height at which the cup and the slice have equal area.
pub fn solve_c0(delta: f64, h: f64, theta0: f64, variant: DcVariant) -> Result<f64> {
    let x = 1.0 - 2.0 * delta;
    let c0 = h / 3.0 + (1.0 - 2.0 * x * x) / wall_rate(x, theta0, variant);
    let (lo, hi) = (h / 3.0, 2.0 * h / 3.0);
    // allow rounding at the ends of the range
    let slack = 1e-12 * h.abs().max(1.0);
    if !(c0 >= lo - slack && c0 <= hi + slack) {
        return Err(Error::NoBalancePoint { c0, lo, hi });
    }
    Ok(c0.clamp(lo, hi))
}

/// Area saved by replacing two disks of radius `eps` with a tube of length
/// `4h/3 - c0`.
pub fn surgery_gain(eps: f64, h: f64, c0: f64) -> f64 {
    2.0 * PI * eps * eps - 2.0 * PI * eps * (4.0 * h / 3.0 - c0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CatenoidFit {
    /// Waist radius.
    pub a: f64,
    /// Waist height.
    pub b: f64,
    pub z1: f64,
    pub z2: f64,
    pub r1: f64,
    pub r2: f64,
}

impl CatenoidFit {
    pub fn radius_at(&self, z: f64) -> f64 {
        self.a * ((z - self.b) / self.a).cosh()
    }

    pub fn residual(&self) -> f64 {
        (self.radius_at(self.z1) - self.r1)
            .abs()
            .max((self.radius_at(self.z2) - self.r2).abs())
    }
}

/// Newton polish of `a cosh((z_i - b)/a) = r_i` with step halving.
fn polish(mut a: f64, mut b: f64, r: [f64; 2], z: [f64; 2]) -> (f64, f64) {
    let res = |a: f64, b: f64| -> [f64; 2] {
        [a * ((z[0] - b) / a).cosh() - r[0], a * ((z[1] - b) / a).cosh() - r[1]]
    };
    for _ in 0..100 {
        let f = res(a, b);
        let n0 = f[0].abs().max(f[1].abs());
        if n0 < 1e-15 * r[0].max(r[1]) {
            break;
        }
        // partials: d/da = cosh u - u sinh u, d/db = -sinh u
        let mut jac = [[0.0; 2]; 2];
        for i in 0..2 {
            let u = (z[i] - b) / a;
            jac[i] = [u.cosh() - u * u.sinh(), -u.sinh()];
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if det.abs() < 1e-300 {
            break;
        }
        let da = (f[0] * jac[1][1] - f[1] * jac[0][1]) / det;
        let db = (jac[0][0] * f[1] - jac[1][0] * f[0]) / det;
        let mut t = 1.0;
        let mut improved = false;
        while t > 1e-6 {
            let (na, nb) = (a - t * da, b - t * db);
            if na > 0.0 {
                let g = res(na, nb);
                if g[0].abs().max(g[1].abs()) < n0 {
                    a = na;
                    b = nb;
                    improved = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (a, b)
}

/// Fits `r = a cosh((z - b)/a)` through two coaxial circles. Among several
/// solutions the one with the largest waist is returned.
pub fn catenoid_fit(r1: f64, z1: f64, r2: f64, z2: f64) -> Result<CatenoidFit> {
    if !(r1 > 0.0 && r2 > 0.0) || z1 == z2 || !(z1.is_finite() && z2.is_finite()) {
        return Err(Error::InvalidParams("catenoid fit needs positive radii and distinct heights".into()));
    }
    // For fixed a, circle 1 gives b = z1 - s1 a acosh(r1/a); circle 2 then
    // requires (z2 - z1)/a + s1 acosh(r1/a) - s2 acosh(r2/a) = 0.
    let amax = r1.min(r2);
    let g = |a: f64, s1: f64, s2: f64| -> f64 {
        (z2 - z1) / a + s1 * (r1 / a).max(1.0).acosh() - s2 * (r2 / a).max(1.0).acosh()
    };
    const SAMPLES: usize = 4000;
    let grid: Vec<f64> = (0..=SAMPLES)
        .map(|k| amax * (1e-6f64).powf(1.0 - k as f64 / SAMPLES as f64))
        .collect();
    let mut roots = Vec::new();
    for (s1, s2) in [(-1.0, 1.0), (1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)] {
        for w in grid.windows(2) {
            let (ga, gb) = (g(w[0], s1, s2), g(w[1], s1, s2));
            if ga == 0.0 || ga.signum() != gb.signum() {
                let (mut lo, mut hi) = (w[0], w[1]);
                let glo = ga;
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    let gm = g(mid, s1, s2);
                    if gm.signum() == glo.signum() {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let a = 0.5 * (lo + hi);
                let b = z1 - s1 * a * (r1 / a).max(1.0).acosh();
                roots.push((a, b));
            }
        }
    }
    let mut best: Option<CatenoidFit> = None;
    for (a0, b0) in roots {
        let (a, b) = polish(a0, b0, [r1, r2], [z1, z2]);
        let fit = CatenoidFit { a, b, z1, z2, r1, r2 };
        if fit.residual() <= 1e-10 * r1.max(r2).max(1.0) && best.map_or(true, |f| a > f.a) {
            best = Some(fit);
        }
    }
    best.ok_or(Error::NoCatenoid)
}

/// Lateral area of the catenoid between the two fitted heights.
pub fn catenoid_area(fit: &CatenoidFit) -> f64 {
    let prim = |u: f64| u + u.sinh() * u.cosh();
    let u1 = (fit.z1 - fit.b) / fit.a;
    let u2 = (fit.z2 - fit.b) / fit.a;
    PI * fit.a * fit.a * (prim(u2) - prim(u1)).abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub delta: f64,
    /// Area of the cube's square cross-section.
    pub disk_area: f64,
    /// Area of the slice outside the cube.
    pub slice_area: f64,
    /// True when the slice is the smaller surface.
    pub slice_minimizes: bool,
    pub tie: bool,
}

pub const IIIB_DELTA_LIMIT: f64 = (2.0 - std::f64::consts::SQRT_2) / 4.0;

pub fn iiib_threshold_check(delta: f64) -> ThresholdReport {
    let x = 1.0 - 2.0 * delta;
    let disk = x * x;
    let slice = 1.0 - disk;
    ThresholdReport {
        delta,
        disk_area: disk,
        slice_area: slice,
        slice_minimizes: slice < disk,
        tie: (slice - disk).abs() <= 1e-12,
    }
}

/// Names accepted by [`ledger_entry`].
pub const ENTRY_NAMES: &[&str] = &[
    "sigma_hat_area",
    "ehat_area",
    "ehat_area_exact",
    "hexagon_flat_disk_area",
    "eps_threshold",
    "disk_dc_area_slanted",
    "disk_dc_area_exact",
    "sigma_c_area",
    "solve_c0_slanted",
    "solve_c0_exact",
    "surgery_gain",
    "catenoid_a",
    "catenoid_b",
    "catenoid_area",
    "iiib_disk_area",
    "iiib_slice_area",
];

/// Evaluates a named ledger formula. Missing parameters take the default
/// example values; unknown parameter names are rejected.
pub fn ledger_entry(name: &str, params: &BTreeMap<String, f64>) -> Result<LedgerEntry> {
    let defaults: &[(&str, f64)] = match name {
        "sigma_hat_area" | "eps_threshold" => &[("C", 10.0)],
        "ehat_area" | "hexagon_flat_disk_area" => &[("eps", 0.05), ("C", 10.0)],
        "ehat_area_exact" => &[("eps", 0.05), ("C", 10.0), ("trim", 0.025)],
        "disk_dc_area_slanted" | "disk_dc_area_exact" => &[
            ("delta", 0.15625),
            ("h", 0.012),
            ("theta0", (0.1f64).atan()),
            ("c", 0.006),
        ],
        "sigma_c_area" | "iiib_disk_area" | "iiib_slice_area" => &[("delta", 0.1)],
        "solve_c0_slanted" | "solve_c0_exact" => {
            &[("delta", 0.15625), ("h", 0.012), ("theta0", (0.1f64).atan())]
        }
        "surgery_gain" => &[("eps", 0.014), ("h", 0.012), ("c0", 0.0075994)],
        "catenoid_a" | "catenoid_b" | "catenoid_area" => {
            &[("r1", 0.979796), ("z1", 0.2), ("r2", 0.994987), ("z2", -0.1)]
        }
        _ => return Err(Error::UnknownName(name.to_string())),
    };
    for k in params.keys() {
        if !defaults.iter().any(|(d, _)| d == k) {
            return Err(Error::UnknownName(format!("parameter {k} for {name}")));
        }
    }
    let inputs: Vec<(&str, f64)> = defaults
        .iter()
        .map(|(k, d)| (*k, params.get(*k).copied().unwrap_or(*d)))
        .collect();
    let p = |k: &str| inputs.iter().find(|(n, _)| *n == k).unwrap().1;
    let (value, formula) = match name {
        "sigma_hat_area" => (sigma_hat_area(p("C")), "2*(C + sqrt(C^2 + 1))"),
        "ehat_area" => (ehat_area(p("eps"), p("C")), "4 + 2*eps*(C + sqrt(C^2 + 1))"),
        "ehat_area_exact" => (
            ehat_area_exact(p("eps"), p("C"), p("trim")),
            "4 + 4*eps*(C + sqrt(C^2 + 1)) - 4*eps*trim",
        ),
        "hexagon_flat_disk_area" => (hexagon_flat_disk_area(p("eps"), p("C")), "2*(1 - eps) + C"),
        "eps_threshold" => (eps_threshold(p("C"))?, "1 - 2/(C + sqrt(C^2 + 1))"),
        "disk_dc_area_slanted" => (
            disk_dc_area(p("delta"), p("h"), p("theta0"), p("c"), DcVariant::Slanted),
            "x^2 + 4x(c - h/3)/sin(theta0), x = 1 - 2 delta",
        ),
        "disk_dc_area_exact" => (
            disk_dc_area(p("delta"), p("h"), p("theta0"), p("c"), DcVariant::Exact),
            "x^2 + 2x(c - h/3)/sin(theta0) + 2x(c - h/3), x = 1 - 2 delta",
        ),
        "sigma_c_area" => (sigma_c_area(p("delta")), "1 - (1 - 2 delta)^2"),
        "solve_c0_slanted" => (
            solve_c0(p("delta"), p("h"), p("theta0"), DcVariant::Slanted)?,
            "h/3 + (1 - 2x^2) sin(theta0)/(4x)",
        ),
        "solve_c0_exact" => (
            solve_c0(p("delta"), p("h"), p("theta0"), DcVariant::Exact)?,
            "h/3 + (1 - 2x^2)/(2x/sin(theta0) + 2x)",
        ),
        "surgery_gain" => (
            surgery_gain(p("eps"), p("h"), p("c0")),
            "2 pi eps^2 - 2 pi eps (4h/3 - c0)",
        ),
        "catenoid_a" | "catenoid_b" | "catenoid_area" => {
            let fit = catenoid_fit(p("r1"), p("z1"), p("r2"), p("z2"))?;
            match name {
                "catenoid_a" => (fit.a, "a with a cosh((z_i - b)/a) = r_i, larger-a branch"),
                "catenoid_b" => (fit.b, "b with a cosh((z_i - b)/a) = r_i, larger-a branch"),
                _ => (catenoid_area(&fit), "pi a^2 [u + sinh u cosh u], u = (z - b)/a"),
            }
        }
        "iiib_disk_area" => (iiib_threshold_check(p("delta")).disk_area, "(1 - 2 delta)^2"),
        "iiib_slice_area" => (iiib_threshold_check(p("delta")).slice_area, "1 - (1 - 2 delta)^2"),
        _ => unreachable!(),
    };
    Ok(LedgerEntry::new(name, value, &inputs, formula))
}
