//! Soap film between two coaxial circles on the unit sphere: closed-form
//! catenoid against the solver, started from a straight frustum.

use std::f64::consts::PI;

use plateau_lab::constructions::frustum_mesh;
use plateau_lab::ledger::{catenoid_area, catenoid_fit};
use plateau_lab::solver::{minimize_area, SolveOptions};

fn main() -> plateau_lab::Result<()> {
    let (z1, z2) = (0.2, -0.1);
    let r = |z: f64| (1.0f64 - z * z).sqrt();
    let fit = catenoid_fit(r(z1), z1, r(z2), z2)?;
    let exact = catenoid_area(&fit);
    println!("fit a = {:.10}, b = {:.10}, residual {:.1e}", fit.a, fit.b, fit.residual());
    println!("waist radius {:.6}", fit.radius_at(0.0));

    let edge = 0.02;
    let n = (2.0 * PI * r(z2) / edge).ceil() as usize;
    let start = frustum_mesh(r(z1), z1, r(z2), z2, edge, n)?;
    let (_, rep) = minimize_area(start, &SolveOptions::default())?;
    println!("catenoid {exact:.7}  solver {:.7}  rel err {:.1e}", rep.final_area, (rep.final_area - exact) / exact);
    println!("two disks {:.7}", PI * (r(z1).powi(2) + r(z2).powi(2)));
    Ok(())
}
