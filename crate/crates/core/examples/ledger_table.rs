//! Every closed-form area formula at its default example parameters.

use std::collections::BTreeMap;

use plateau_lab::ledger::{ledger_entry, ENTRY_NAMES};

fn main() -> plateau_lab::Result<()> {
    for name in ENTRY_NAMES {
        let e = ledger_entry(name, &BTreeMap::new())?;
        let inputs: Vec<String> = e.inputs.iter().map(|(k, v)| format!("{k}={v}")).collect();
        println!("{:<24} {:>14.9}  {}  [{}]", e.name, e.value, e.formula_source, inputs.join(", "));
    }
    Ok(())
}
