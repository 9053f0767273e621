//! Horizontal and slanted slices of the unit torus with a cube removed:
//! where they meet, and how many curves the slanted one cuts from the cube.

use plateau_lab::constructions::{build_iiib_surfaces, ExampleIIIBParams};
use plateau_lab::geom::surface_intersection;
use plateau_lab::ledger::iiib_threshold_check;

fn main() -> plateau_lab::Result<()> {
    for d in [0.1, 0.5] {
        let p = ExampleIIIBParams { d, ..Default::default() };
        let (sigma, slant, gamma, alphas) = build_iiib_surfaces(&p, 0.05)?;
        let loops = surface_intersection(&sigma, &slant);
        println!("d = {d}: {} curve(s) on the cube, {} intersection loop(s)", alphas.len(), loops.len());
        for l in &loops {
            let q = l.points[0];
            println!("  loop of {} points, closed {}, through y = {:.6}, z = {:.6}", l.points.len(), l.closed, q.y, q.z);
        }
        let gap = alphas.iter().map(|a| gamma.min_distance(a)).fold(f64::INFINITY, f64::min);
        println!("  distance between the cross-section and the cube curves {gap:.4}");
    }
    for delta in [0.1, 0.2] {
        let t = iiib_threshold_check(delta);
        println!("delta {delta}: slice {:.4} vs disk {:.4}, slice minimizes: {}", t.slice_area, t.disk_area, t.slice_minimizes);
    }
    Ok(())
}
