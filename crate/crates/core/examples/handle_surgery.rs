//! Joins the torus slice and the cup at their balance height by a tube,
//! once each way round, and compares boundary multiplicities and areas.

use plateau_lab::constructions::{gamma_at, mesh_surgery, surgery_inputs, surgery_layout, ExampleIIParams, HandleSide};
use plateau_lab::geom::boundary_multiplicity;
use plateau_lab::ledger::{sigma_c_area, surgery_gain, DcVariant};

fn main() -> plateau_lab::Result<()> {
    let p = ExampleIIParams::default();
    let lay = surgery_layout(&p, DcVariant::Exact)?;
    let (slice, cup) = surgery_inputs(&p, &lay, 0.05)?;
    let gamma = gamma_at(&p, lay.c0)?;
    println!("balance height {:.7}, slice {:.7}, cup {:.7}", lay.c0, slice.area(), cup.area());
    for side in [HandleSide::Correct, HandleSide::Opposite] {
        let m = mesh_surgery(&slice, &cup, lay.slice_centre, lay.cup_end(&p, side), lay.radius, side)?;
        println!(
            "{side:?}: area {:.7}, multiplicity {}, coherent {}, components {}",
            m.area(),
            boundary_multiplicity(&m, &gamma, 1e-9)?,
            m.is_coherently_oriented(),
            m.component_count()
        );
    }
    println!("twice the slice {:.7}, predicted saving {:.3e}", 2.0 * sigma_c_area(p.delta), surgery_gain(p.eps, p.h, lay.c0));
    Ok(())
}
