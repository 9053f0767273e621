//! End-to-end verification pipelines for the four examples, their
//! configuration files and report persistence.

mod build;
mod catalog;
pub mod config;
mod example1;
mod example2;
mod example3;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::geom::obj::{polyline_obj_string, write_mesh};
use crate::geom::{ClosedPolyline, TriSurfaceMesh};
use crate::ledger::LedgerEntry;
use crate::solver::SolveReport;

pub use build::build_example;
pub use catalog::{catalog_matches, check_catalog, CatalogEntry};
pub use config::{load_config, ExampleConfig, ExampleIConfig, ExampleIIConfig, ExampleIIIAConfig, ExampleIIIBConfig};
pub use example1::verify_example_i;
pub use example2::verify_example_ii;
pub use example3::{verify_example_iiia, verify_example_iiib};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ExampleId {
    I,
    II,
    IIIA,
    IIIB,
}

impl ExampleId {
    pub const ALL: [ExampleId; 4] = [ExampleId::I, ExampleId::II, ExampleId::IIIA, ExampleId::IIIB];

    pub fn as_str(self) -> &'static str {
        match self {
            ExampleId::I => "I",
            ExampleId::II => "II",
            ExampleId::IIIA => "IIIA",
            ExampleId::IIIB => "IIIB",
        }
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExampleId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownName(format!("example {s}")))
    }
}

/// One verified statement. `relation` reads `observed <relation> expected`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub relation: String,
    pub expected: Value,
    pub observed: Value,
    pub tolerance: f64,
    pub pass: bool,
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or_else(|| Value::String(format!("{x}")), Value::Number)
}

impl Check {
    fn new(name: &str, relation: &str, expected: Value, observed: Value, tolerance: f64, pass: bool) -> Self {
        Check { name: name.to_string(), relation: relation.to_string(), expected, observed, tolerance, pass }
    }

    /// `observed < bound`.
    pub fn lt(name: &str, observed: f64, bound: f64) -> Self {
        Check::new(name, "<", num(bound), num(observed), 0.0, observed < bound)
    }

    /// `observed <= bound + tol`.
    pub fn le(name: &str, observed: f64, bound: f64, tol: f64) -> Self {
        Check::new(name, "<=", num(bound), num(observed), tol, observed <= bound + tol)
    }

    /// `observed > bound`.
    pub fn gt(name: &str, observed: f64, bound: f64) -> Self {
        Check::new(name, ">", num(bound), num(observed), 0.0, observed > bound)
    }

    /// `|observed - expected| <= tol`.
    pub fn near(name: &str, observed: f64, expected: f64, tol: f64) -> Self {
        Check::new(name, "~", num(expected), num(observed), tol, (observed - expected).abs() <= tol)
    }

    /// `|observed - expected| <= rel * |expected|`; the stored tolerance is
    /// the relative one.
    pub fn near_rel(name: &str, observed: f64, expected: f64, rel: f64) -> Self {
        let pass = (observed - expected).abs() <= rel * expected.abs();
        Check::new(name, "~rel", num(expected), num(observed), rel, pass)
    }

    pub fn int_eq(name: &str, observed: i64, expected: i64) -> Self {
        Check::new(name, "==", Value::from(expected), Value::from(observed), 0.0, observed == expected)
    }

    pub fn int_ge(name: &str, observed: i64, bound: i64) -> Self {
        Check::new(name, ">=", Value::from(bound), Value::from(observed), 0.0, observed >= bound)
    }

    pub fn holds(name: &str, observed: bool) -> Self {
        Check::new(name, "==", Value::Bool(true), Value::Bool(observed), 0.0, observed)
    }

    /// Each entry at most the previous one plus `tol`.
    pub fn non_increasing(name: &str, seq: &[f64], tol: f64) -> Self {
        let pass = seq.windows(2).all(|w| w[1] <= w[0] + tol);
        Check::new(name, "non-increasing", Value::Null, Value::Array(seq.iter().map(|&x| num(x)).collect()), tol, pass)
    }

    /// Each entry greater than the previous one.
    pub fn increasing(name: &str, seq: &[f64]) -> Self {
        let pass = seq.windows(2).all(|w| w[1] > w[0]);
        Check::new(name, "increasing", Value::Null, Value::Array(seq.iter().map(|&x| num(x)).collect()), 0.0, pass)
    }
}

/// A labelled solver run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverRun {
    pub label: String,
    #[serde(flatten)]
    pub report: SolveReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleReport {
    pub example_id: ExampleId,
    pub params: BTreeMap<String, Value>,
    pub ledger: Vec<LedgerEntry>,
    pub solver_runs: Vec<SolverRun>,
    pub checks: Vec<Check>,
    /// File names, relative to the output directory.
    pub artifacts: Vec<String>,
    pub pass: bool,
}

impl ExampleReport {
    fn new(example_id: ExampleId) -> Self {
        ExampleReport {
            example_id,
            params: BTreeMap::new(),
            ledger: Vec::new(),
            solver_runs: Vec::new(),
            checks: Vec::new(),
            artifacts: Vec::new(),
            pass: false,
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    fn param(&mut self, k: &str, v: impl Into<Value>) {
        self.params.insert(k.to_string(), v.into());
    }

    fn run(&mut self, label: &str, report: &SolveReport) {
        self.solver_runs.push(SolverRun { label: label.to_string(), report: report.clone() });
    }

    fn finish(mut self) -> Self {
        self.pass = !self.checks.is_empty() && self.checks.iter().all(|c| c.pass);
        self
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

/// A mesh or curve produced by a pipeline, to be written next to the report.
#[derive(Debug, Clone)]
pub enum ArtifactData {
    Mesh(TriSurfaceMesh),
    Curves(Vec<ClosedPolyline>),
}

#[derive(Debug, Clone)]
pub struct Artifact {
    pub file: String,
    pub data: ArtifactData,
}

/// Report plus the artifacts it names.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: ExampleReport,
    pub artifacts: Vec<Artifact>,
}

impl Outcome {
    fn new(report: ExampleReport) -> Self {
        Outcome { report, artifacts: Vec::new() }
    }

    fn mesh(&mut self, file: &str, m: &TriSurfaceMesh) {
        self.report.artifacts.push(file.to_string());
        self.artifacts.push(Artifact { file: file.to_string(), data: ArtifactData::Mesh(m.clone()) });
    }

    fn curves(&mut self, file: &str, c: &[ClosedPolyline]) {
        self.report.artifacts.push(file.to_string());
        self.artifacts.push(Artifact { file: file.to_string(), data: ArtifactData::Curves(c.to_vec()) });
    }

    fn finish(mut self) -> Self {
        self.report = self.report.finish();
        self
    }

    /// Writes every artifact and `report.json` into `dir`.
    pub fn persist(&self, dir: &Path) -> Result<()> {
        write_artifacts(dir, &self.artifacts)?;
        std::fs::write(dir.join("report.json"), self.report.to_json()?)?;
        Ok(())
    }
}

/// Writes each artifact as OBJ into `dir` (created if missing).
pub fn write_artifacts(dir: &Path, artifacts: &[Artifact]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    for a in artifacts {
        let path = dir.join(&a.file);
        match &a.data {
            ArtifactData::Mesh(m) => write_mesh(m, &path)?,
            ArtifactData::Curves(c) => std::fs::write(&path, polyline_obj_string(c))?,
        }
    }
    Ok(())
}

/// Runs the pipeline selected by the configuration.
pub fn run_example(cfg: &ExampleConfig) -> Result<Outcome> {
    match cfg {
        ExampleConfig::I(c) => verify_example_i(c),
        ExampleConfig::II(c) => verify_example_ii(c),
        ExampleConfig::IIIA(c) => verify_example_iiia(c),
        ExampleConfig::IIIB(c) => verify_example_iiib(c),
    }
}

/// Name with the value of a sweep parameter attached, e.g. `D.area[eps=0.1]`.
fn tagged(name: &str, key: &str, v: f64) -> String {
    format!("{name}[{key}={v}]")
}
