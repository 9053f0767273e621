//! Perturbs a flat torus slice and lets the solver pull it back; writes the
//! result as OBJ plus its wrap-shift sidecar and reads it back.

use plateau_lab::constructions::{build_sigma_c_mesh, ExampleIIParams};
use plateau_lab::geom::obj::{read_mesh, write_mesh};
use plateau_lab::ledger::sigma_c_area;
use plateau_lab::solver::{minimize_area_torus, SolveOptions};

fn main() -> plateau_lab::Result<()> {
    let p = ExampleIIParams::default();
    let flat = build_sigma_c_mesh(&p, 0.05)?;
    let opts = SolveOptions { jitter: 0.1 * p.h, seed: 7, max_iters: 500, ..Default::default() };
    let (m, r) = minimize_area_torus(flat, &opts)?;
    println!("start {:.8}  relaxed {:.10}  exact {:.10}  steps {}", r.area_history[0], r.final_area, sigma_c_area(p.delta), r.iters);

    let dir = std::env::temp_dir().join("plateau-lab-torus");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("slice.obj");
    write_mesh(&m, &path)?;
    let back = read_mesh(&path)?;
    println!("wrote {}; re-read area {:.10}", path.display(), back.area());
    Ok(())
}
