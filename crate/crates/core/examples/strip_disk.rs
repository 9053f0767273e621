//! The strip disk over the bridged curve relaxes into a disk that crosses
//! itself, while the bridged pair of flat disks stays embedded.

use plateau_lab::constructions::{build_ehat_mesh, build_sigmahat_init, ExampleIParams};
use plateau_lab::geom::self_intersections;
use plateau_lab::ledger::{ehat_area_exact, sigma_hat_area};
use plateau_lab::solver::{minimize_area, SolveOptions};

fn main() -> plateau_lab::Result<()> {
    let eps: f64 = std::env::args().nth(1).map_or(Ok(0.1), |s| s.parse()).expect("eps must be a number");
    let p = ExampleIParams { eps, c: 10.0, bridge_width: 0.05f64.min(eps), trim: 0.025f64.min(eps / 2.0) };
    let opts = SolveOptions { grad_tol: 1e-3, ..Default::default() };

    let strip = build_ehat_mesh(&p, eps.min(0.1))?;
    println!("strip disk area {:.4} (closed form {:.4})", strip.area(), ehat_area_exact(eps, p.c, p.trim));
    let (d, r) = minimize_area(strip, &opts)?;
    println!("  minimizer {:.4} in {} steps, {} crossing triangle pairs", r.final_area, r.iters, self_intersections(&d).len());

    let pair = build_sigmahat_init(&p, 0.1)?;
    println!("bridged pair area {:.4} (competitor formula {:.4})", pair.area(), sigma_hat_area(p.c));
    let (s, r) = minimize_area(pair, &opts)?;
    println!("  minimizer {:.4} in {} steps, {} crossing triangle pairs", r.final_area, r.iters, self_intersections(&s).len());
    Ok(())
}
