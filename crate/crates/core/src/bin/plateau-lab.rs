use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use plateau_lab::geom::obj::{read_mesh, write_mesh};
use plateau_lab::harness::config::parse_override;
use plateau_lab::harness::{build_example, check_catalog, load_config, run_example, write_artifacts, ExampleId};
use plateau_lab::ledger::{ledger_entry, ENTRY_NAMES};
use plateau_lab::solver::{minimize, SolveOptions};
use plateau_lab::Result;

#[derive(Parser)]
#[command(name = "plateau-lab", version, about = "Minimal-surface constructions, area ledger and verification pipelines")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write the boundary curves and starting surfaces of an example as OBJ.
    Build {
        example: ExampleId,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// Evaluate closed-form area formulas (all of them when no name is given).
    Ledger {
        names: Vec<String>,
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
    },
    /// Minimize the area of an OBJ mesh with its boundary held fixed.
    Solve {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// JSON file with solver options; omitted fields take defaults.
        #[arg(long)]
        opts: Option<PathBuf>,
        /// Where to write the solve report (stdout when omitted).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run an example's verification pipeline.
    Verify {
        #[arg(required_unless_present = "list_checks")]
        example: Option<ExampleId>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
        /// Print the checks instead of running them.
        #[arg(long)]
        list_checks: bool,
    },
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Build { example, config, params, out_dir } => {
            let cfg = load_config(example, config.as_deref(), &params)?;
            let artifacts = build_example(&cfg)?;
            write_artifacts(&out_dir, &artifacts)?;
            for a in &artifacts {
                println!("{}", out_dir.join(&a.file).display());
            }
            Ok(true)
        }
        Cmd::Ledger { names, params } => {
            let params = params
                .iter()
                .map(|s| {
                    let (k, v) = parse_override(s)?;
                    let x = v.as_f64().ok_or_else(|| plateau_lab::Error::InvalidParams(format!("{k} is not a number")))?;
                    Ok((k, x))
                })
                .collect::<Result<_>>()?;
            let names: Vec<String> = if names.is_empty() { ENTRY_NAMES.iter().map(|s| s.to_string()).collect() } else { names };
            let entries = names.iter().map(|n| ledger_entry(n, &params)).collect::<Result<Vec<_>>>()?;
            println!("{}", serde_json::to_string_pretty(&entries)?);
            Ok(true)
        }
        Cmd::Solve { input, out, opts, report } => {
            let opts: SolveOptions = match opts {
                Some(p) => serde_json::from_str(&std::fs::read_to_string(p)?)?,
                None => SolveOptions::default(),
            };
            let (m, rep) = minimize(read_mesh(&input)?, &opts)?;
            write_mesh(&m, &out)?;
            let text = serde_json::to_string_pretty(&rep)? + "\n";
            match report {
                Some(p) => std::fs::write(p, text)?,
                None => print!("{text}"),
            }
            Ok(rep.converged)
        }
        Cmd::Verify { example, config, params, out_dir, list_checks } => {
            if list_checks {
                for c in check_catalog(example) {
                    println!("{:<5} {:<36} {}", c.example, c.name, c.description);
                }
                return Ok(true);
            }
            let id = example.expect("clap enforces the example");
            let cfg = load_config(id, config.as_deref(), &params)?;
            let outcome = run_example(&cfg)?;
            outcome.persist(&out_dir)?;
            let r = &outcome.report;
            for c in &r.checks {
                println!("{} {}", if c.pass { "PASS" } else { "FAIL" }, c.name);
            }
            println!("example {}: {}", r.example_id, if r.pass { "PASS" } else { "FAIL" });
            Ok(r.pass)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
