//! Flattens a cone spanning the square boundary back into the unit square.

use plateau_lab::constructions::build_tau;
use plateau_lab::geom::Point3;
use plateau_lab::solver::{cone_disk, minimize_area, SolveOptions};

fn main() -> plateau_lab::Result<()> {
    let tau = build_tau(1.0);
    let cone = cone_disk(&tau, Point3::new(0.0, 0.0, 1.0), 0.05)?;
    println!("cone: {} triangles, area {:.6}", cone.triangle_count(), cone.area());
    let (flat, r) = minimize_area(cone, &SolveOptions::default())?;
    let zmax = flat.vertices.iter().map(|p| p.z.abs()).fold(0.0, f64::max);
    println!("after {} steps ({} flips): area {:.10}, max |z| {zmax:.2e}, converged {}", r.iters, r.flips, r.final_area, r.converged);
    Ok(())
}
