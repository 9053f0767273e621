//! Runs the four verification pipelines with default settings and writes
//! reports and meshes under `out/`.

use std::path::Path;

use plateau_lab::harness::{run_example, ExampleConfig, ExampleId};

fn main() -> plateau_lab::Result<()> {
    for id in ExampleId::ALL {
        let outcome = run_example(&ExampleConfig::default_for(id))?;
        let dir = Path::new("out").join(id.as_str());
        outcome.persist(&dir)?;
        let r = &outcome.report;
        let failed: Vec<&str> = r.failed_checks().map(|c| c.name.as_str()).collect();
        println!("{id}: {} checks, pass {}, written to {}", r.checks.len(), r.pass, dir.display());
        for name in failed {
            println!("  failed {name}");
        }
    }
    Ok(())
}
