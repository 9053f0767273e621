//! Pipeline configurations. Each example has a versioned JSON file; any
//! field can be overridden with `key=value` pairs, dotted for nested
//! fields (`solve.max_iters=500`).

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::ExampleId;
use crate::constructions::{ExampleIIIBParams, ExampleIIParams};
use crate::error::{Error, Result};
use crate::solver::SolveOptions;

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExampleIConfig {
    pub version: u32,
    #[serde(rename = "C")]
    pub c: f64,
    /// Strip half-widths, largest first.
    pub eps_sequence: Vec<f64>,
    pub bridge_width: f64,
    pub trim: f64,
    /// The strip disk is meshed at `min(max_edge, eps)`.
    pub max_edge: f64,
    pub sigmahat_edge: f64,
    /// Hausdorff sample spacing as a fraction of the mesh edge.
    pub hausdorff_sample_ratio: f64,
    pub solve: SolveOptions,
}

impl Default for ExampleIConfig {
    fn default() -> Self {
        ExampleIConfig {
            version: CONFIG_VERSION,
            c: 10.0,
            eps_sequence: vec![0.2, 0.1, 0.05],
            bridge_width: 0.05,
            trim: 0.025,
            max_edge: 0.1,
            sigmahat_edge: 0.1,
            hausdorff_sample_ratio: 0.25,
            solve: SolveOptions { max_iters: 2000, grad_tol: 1e-3, ..SolveOptions::default() },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExampleIIConfig {
    pub version: u32,
    pub params: ExampleIIParams,
    pub target_edge: f64,
    /// Jitter of the relaxation run, in units of `h`.
    pub jitter_h: f64,
    pub solve: SolveOptions,
}

impl Default for ExampleIIConfig {
    fn default() -> Self {
        ExampleIIConfig {
            version: CONFIG_VERSION,
            params: ExampleIIParams::default(),
            target_edge: 0.05,
            jitter_h: 0.1,
            solve: SolveOptions { max_iters: 500, seed: 7, ..SolveOptions::default() },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExampleIIIAConfig {
    pub version: u32,
    pub target_edge: f64,
    /// Allowed height of the intersection loop above the mirror plane.
    pub plane_tol: f64,
    /// Allowed deviation of the loop radius from the catenoid's.
    pub radius_tol: f64,
    pub solve: SolveOptions,
}

impl Default for ExampleIIIAConfig {
    fn default() -> Self {
        ExampleIIIAConfig {
            version: CONFIG_VERSION,
            target_edge: 0.02,
            plane_tol: 1e-6,
            radius_tol: 1e-3,
            solve: SolveOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExampleIIIBConfig {
    pub version: u32,
    pub params: ExampleIIIBParams,
    pub target_edge: f64,
    /// Allowed deviation of the intersection loop from its line.
    pub line_tol: f64,
    pub jitter: f64,
    pub solve: SolveOptions,
}

impl Default for ExampleIIIBConfig {
    fn default() -> Self {
        ExampleIIIBConfig {
            version: CONFIG_VERSION,
            params: ExampleIIIBParams::default(),
            target_edge: 0.05,
            line_tol: 1e-9,
            jitter: 0.01,
            solve: SolveOptions { max_iters: 500, seed: 11, ..SolveOptions::default() },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "example")]
pub enum ExampleConfig {
    I(ExampleIConfig),
    II(ExampleIIConfig),
    IIIA(ExampleIIIAConfig),
    IIIB(ExampleIIIBConfig),
}

impl ExampleConfig {
    pub fn default_for(id: ExampleId) -> Self {
        match id {
            ExampleId::I => ExampleConfig::I(ExampleIConfig::default()),
            ExampleId::II => ExampleConfig::II(ExampleIIConfig::default()),
            ExampleId::IIIA => ExampleConfig::IIIA(ExampleIIIAConfig::default()),
            ExampleId::IIIB => ExampleConfig::IIIB(ExampleIIIBConfig::default()),
        }
    }

    pub fn id(&self) -> ExampleId {
        match self {
            ExampleConfig::I(_) => ExampleId::I,
            ExampleConfig::II(_) => ExampleId::II,
            ExampleConfig::IIIA(_) => ExampleId::IIIA,
            ExampleConfig::IIIB(_) => ExampleId::IIIB,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

/// Parses `key=value`; the value is read as JSON when it parses, else as a
/// string.
pub fn parse_override(s: &str) -> Result<(String, Value)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| Error::InvalidParams(format!("override {s:?} is not key=value")))?;
    let k = k.trim();
    if k.is_empty() {
        return Err(Error::InvalidParams(format!("override {s:?} has an empty key")));
    }
    let v = v.trim();
    let value = serde_json::from_str(v).unwrap_or_else(|_| Value::String(v.to_string()));
    Ok((k.to_string(), value))
}

fn apply_override(doc: &mut Value, key: &str, value: Value) -> Result<()> {
    let mut cur = doc;
    let parts: Vec<&str> = key.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        let obj = cur
            .as_object_mut()
            .ok_or_else(|| Error::InvalidParams(format!("{key}: {part} is not inside an object")))?;
        if !obj.contains_key(*part) {
            return Err(Error::UnknownName(format!("config field {key}")));
        }
        if i + 1 == parts.len() {
            obj.insert(part.to_string(), value);
            return Ok(());
        }
        cur = obj.get_mut(*part).unwrap();
    }
    Ok(())
}

/// Loads the configuration for `id` from `path` (or the built-in default)
/// and applies `overrides`.
pub fn load_config(id: ExampleId, path: Option<&Path>, overrides: &[String]) -> Result<ExampleConfig> {
    let mut doc: Value = match path {
        Some(p) => serde_json::from_str(&std::fs::read_to_string(p)?)?,
        None => serde_json::to_value(ExampleConfig::default_for(id))?,
    };
    match doc.get("example").and_then(Value::as_str) {
        Some(e) if e == id.as_str() => {}
        Some(e) => return Err(Error::InvalidParams(format!("config is for example {e}, not {id}"))),
        None => return Err(Error::InvalidParams("config lacks the \"example\" field".into())),
    }
    for o in overrides {
        let (k, v) = parse_override(o)?;
        if k == "example" {
            return Err(Error::InvalidParams("the example field cannot be overridden".into()));
        }
        apply_override(&mut doc, &k, v)?;
    }
    let cfg: ExampleConfig = serde_json::from_value(doc)?;
    let version = match &cfg {
        ExampleConfig::I(c) => c.version,
        ExampleConfig::II(c) => c.version,
        ExampleConfig::IIIA(c) => c.version,
        ExampleConfig::IIIB(c) => c.version,
    };
    if version != CONFIG_VERSION {
        return Err(Error::InvalidParams(format!("config version {version}, expected {CONFIG_VERSION}")));
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_roundtrip() {
        for id in ExampleId::ALL {
            let c = ExampleConfig::default_for(id);
            let back: ExampleConfig = serde_json::from_str(&c.to_json().unwrap()).unwrap();
            assert_eq!(back, c);
            assert_eq!(back.id(), id);
        }
    }

    #[test]
    fn overrides_reach_nested_fields() {
        let c = load_config(ExampleId::I, None, &["solve.max_iters=7".into(), "C=12".into()]).unwrap();
        match c {
            ExampleConfig::I(c) => {
                assert_eq!(c.solve.max_iters, 7);
                assert_eq!(c.c, 12.0);
            }
            _ => panic!(),
        }
        let c = load_config(ExampleId::IIIB, None, &["params.d=0.5".into()]).unwrap();
        assert!(matches!(c, ExampleConfig::IIIB(c) if c.params.d == 0.5));
    }

    #[test]
    fn bad_overrides_are_rejected() {
        assert!(matches!(load_config(ExampleId::I, None, &["nope=1".into()]), Err(Error::UnknownName(_))));
        assert!(load_config(ExampleId::I, None, &["C".into()]).is_err());
        assert!(load_config(ExampleId::I, None, &["C=\"x\"".into()]).is_err());
        assert!(load_config(ExampleId::II, None, &["example=I".into()]).is_err());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let mut doc = serde_json::to_value(ExampleConfig::default_for(ExampleId::IIIA)).unwrap();
        doc.as_object_mut().unwrap().insert("extra".into(), Value::from(1));
        assert!(serde_json::from_value::<ExampleConfig>(doc).is_err());
    }
}
