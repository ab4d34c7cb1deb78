//! Scenario files.
//!
//! A scenario is a TOML document with a `schema_version` and the sections
//! `[scenario]`, `[model]`, `[solver]`, `[diagnostics]` (with an optional
//! `[diagnostics.schedule]`), `[output]` and `[sweep]`. Only `[scenario]` and
//! `[model]` are required. Unknown keys are rejected.
//!
//! ```toml
//! schema_version = 1
//!
//! [scenario]
//! name = "f1-contract"
//!
//! [model]
//! type = "calabi"   # or "product" with factors = ["P1", "T2"], c0 = [1.0, 2.0]
//! a = 1.0
//! b = 4.0
//!
//! [solver]
//! dt = 1e-3
//!
//! [diagnostics]
//! alphas = [0.25, 0.5, 1.0]
//!
//! [diagnostics.schedule]
//! extra_times = [0.3]
//! ```

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::diagnostics::DiagnosticsConfig;
use crate::error::FlowError;
use crate::models::calabi::{DEFAULT_HALF_WIDTH, DEFAULT_POINTS};
use crate::models::{CalabiModel, CurveKind, Model, ProductModel};
use crate::runner::RunnerError;
use crate::solver::SolverConfig;

pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable that overrides the output root of a scenario.
pub const OUT_ENV: &str = "KRFLOW_OUT";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    pub scenario: ScenarioMeta,
    pub model: ModelConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub diagnostics: DiagnosticsConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioMeta {
    pub name: String,
    #[serde(default)]
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelConfig {
    Product {
        factors: Vec<CurveKind>,
        c0: Vec<f64>,
    },
    Calabi {
        a: f64,
        b: f64,
        #[serde(default = "default_half_width")]
        half_width: f64,
        #[serde(default = "default_points")]
        points: usize,
    },
}

fn default_half_width() -> f64 {
    DEFAULT_HALF_WIDTH
}

fn default_points() -> usize {
    DEFAULT_POINTS
}

impl ModelConfig {
    pub fn build(&self) -> Result<Model, RunnerError> {
        match self {
            ModelConfig::Product { factors, c0 } => ProductModel::from_kinds(factors, c0)
                .map(Model::Product)
                .map_err(|e| field_error("model", e)),
            ModelConfig::Calabi {
                a,
                b,
                half_width,
                points,
            } => CalabiModel::new(*a, *b, *half_width, *points)
                .map(Model::Calabi)
                .map_err(|e| field_error("model", e)),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ModelConfig::Product { .. } => "product",
            ModelConfig::Calabi { .. } => "calabi",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    /// Output root; each run writes into `<dir>/<scenario name>/`.
    pub dir: PathBuf,
    /// Also write the final Calabi profile as `grid.csv`.
    pub grid_dump: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            grid_dump: false,
        }
    }
}

/// One-axis parameter grid. `parameter` is a dotted path into the scenario
/// document, e.g. `model.b`, `solver.dt` or `model.c0.1` (array index).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: String,
    #[serde(default)]
    pub values: Vec<f64>,
}

/// Validation failure located by a dotted field path.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

fn config_error(path: impl Into<String>, message: impl Into<String>) -> RunnerError {
    RunnerError::Config(ConfigError {
        path: path.into(),
        message: message.into(),
    })
}

/// Maps a `"field: message"` validation error under `section`.
fn field_error(section: &str, e: FlowError) -> RunnerError {
    let msg = match e {
        FlowError::InvalidParameter(m) => m,
        other => other.to_string(),
    };
    match msg.split_once(": ") {
        Some((field, rest)) if !field.contains(' ') => {
            config_error(format!("{section}.{field}"), rest)
        }
        _ => config_error(section, msg),
    }
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, RunnerError> {
        let value: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| config_error("", e.to_string()))?;
        Self::from_table(value)
    }

    pub fn from_table(table: toml::Table) -> Result<Self, RunnerError> {
        if let Some(v) = table.get("schema_version") {
            if v.as_integer() != Some(SCHEMA_VERSION as i64) {
                return Err(config_error(
                    "schema_version",
                    format!("unsupported version {v}, expected {SCHEMA_VERSION}"),
                ));
            }
        }
        let cfg: ScenarioConfig = table
            .try_into()
            .map_err(|e: toml::de::Error| config_error("", e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, RunnerError> {
        let text = std::fs::read_to_string(path).map_err(|e| RunnerError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Self::from_toml_str(&text).map_err(|e| match e {
            RunnerError::Config(mut c) => {
                c.message = format!("{} ({})", c.message, path.display());
                RunnerError::Config(c)
            }
            other => other,
        })
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("scenario configs serialize")
    }

    /// Semantic checks beyond what the schema enforces.
    pub fn validate(&self) -> Result<(), RunnerError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(config_error(
                "schema_version",
                format!("unsupported version {}, expected {SCHEMA_VERSION}", self.schema_version),
            ));
        }
        let name = &self.scenario.name;
        if name.is_empty()
            || !name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || "-_.=@".contains(c))
        {
            return Err(config_error(
                "scenario.name",
                format!("'{name}' must be non-empty and use only [A-Za-z0-9-_.=@]"),
            ));
        }
        match &self.model {
            ModelConfig::Product { factors, c0 } => {
                if factors.len() < 2 {
                    return Err(config_error("model.factors", "need at least two factors"));
                }
                if factors.len() != c0.len() {
                    return Err(config_error(
                        "model.c0",
                        format!("{} values for {} factors", c0.len(), factors.len()),
                    ));
                }
                if let Some(i) = c0.iter().position(|c| !(*c > 0.0 && c.is_finite())) {
                    return Err(config_error(
                        format!("model.c0.{i}"),
                        format!("must be positive, got {}", c0[i]),
                    ));
                }
            }
            ModelConfig::Calabi {
                a,
                b,
                half_width,
                points,
            } => {
                if !(*a > 0.0 && a.is_finite()) {
                    return Err(config_error("model.a", format!("must be positive, got {a}")));
                }
                if !(*b > *a && b.is_finite()) {
                    return Err(config_error("model.b", format!("must exceed a = {a}, got {b}")));
                }
                if !(*half_width > 0.0 && half_width.is_finite()) {
                    return Err(config_error(
                        "model.half_width",
                        format!("must be positive, got {half_width}"),
                    ));
                }
                if *points < 5 {
                    return Err(config_error(
                        "model.points",
                        format!("need at least 5 grid points, got {points}"),
                    ));
                }
            }
        }
        self.solver
            .validate()
            .map_err(|e| field_error("solver", e))?;
        self.diagnostics
            .validate()
            .map_err(|e| field_error("diagnostics", e))?;
        if let Some(sweep) = &self.sweep {
            if sweep.parameter.is_empty() {
                return Err(config_error("sweep.parameter", "must not be empty"));
            }
            if sweep.values.iter().any(|v| !v.is_finite()) {
                return Err(config_error("sweep.values", "must be finite"));
            }
        }
        self.build_model()?;
        Ok(())
    }

    pub fn build_model(&self) -> Result<Model, RunnerError> {
        self.model.build()
    }

    /// Sample schedule for this scenario.
    pub fn sample_times(&self) -> Result<Vec<f64>, RunnerError> {
        let model = self.build_model()?;
        let setup = model.setup().map_err(|e| field_error("model", e))?;
        let sing = crate::cohomology::singularity_time(&setup).map_err(|e| field_error("model", e))?;
        self.diagnostics
            .schedule
            .times(sing.time, &self.solver)
            .map_err(|e| field_error("solver", e))
    }

    /// Output root: `cli` if given, else the environment override, else
    /// the configured directory.
    pub fn output_root(&self, cli: Option<&Path>) -> PathBuf {
        if let Some(p) = cli {
            return p.to_path_buf();
        }
        match std::env::var_os(OUT_ENV) {
            Some(v) if !v.is_empty() => PathBuf::from(v),
            _ => self.output.dir.clone(),
        }
    }

    /// Copy with `parameter` (dotted path) set to `value`; the result is
    /// re-validated.
    pub fn with_parameter(&self, parameter: &str, value: f64) -> Result<Self, RunnerError> {
        let mut doc = toml::Table::try_from(self).expect("scenario configs serialize");
        set_path(&mut doc, parameter, value)?;
        Self::from_table(doc)
    }
}

fn set_path(doc: &mut toml::Table, path: &str, value: f64) -> Result<(), RunnerError> {
    let parts: Vec<&str> = path.split('.').collect();
    let unknown = || config_error("sweep.parameter", format!("'{path}' does not name a numeric field"));
    let (last, head) = parts.split_last().ok_or_else(unknown)?;
    let mut cursor: &mut toml::Value = doc
        .get_mut(head.first().copied().unwrap_or(last))
        .ok_or_else(unknown)?;
    if head.is_empty() {
        return assign(cursor, value).ok_or_else(unknown);
    }
    for part in &head[1..] {
        cursor = step_into(cursor, part).ok_or_else(unknown)?;
    }
    let slot = match cursor {
        toml::Value::Table(t) => {
            // Optional fields may be absent from the serialized document.
            t.entry(last.to_string())
                .or_insert(toml::Value::Float(value))
        }
        other => step_into(other, last).ok_or_else(unknown)?,
    };
    assign(slot, value).ok_or_else(unknown)
}

fn step_into<'a>(v: &'a mut toml::Value, part: &str) -> Option<&'a mut toml::Value> {
    match v {
        toml::Value::Table(t) => t.get_mut(part),
        toml::Value::Array(a) => a.get_mut(part.parse::<usize>().ok()?),
        _ => None,
    }
}

fn assign(slot: &mut toml::Value, value: f64) -> Option<()> {
    match slot {
        toml::Value::Float(_) => *slot = toml::Value::Float(value),
        toml::Value::Integer(_) => {
            if value.fract() != 0.0 {
                return None;
            }
            *slot = toml::Value::Integer(value as i64)
        }
        _ => return None,
    }
    Some(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
schema_version = 1
[scenario]
name = "t"
[model]
type = "calabi"
a = 1.0
b = 4.0
"#;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = ScenarioConfig::from_toml_str(MINIMAL).unwrap();
        assert_eq!(cfg.solver, SolverConfig::default());
        match cfg.model {
            ModelConfig::Calabi { points, .. } => assert_eq!(points, DEFAULT_POINTS),
            _ => panic!("wrong model"),
        }
    }

    #[test]
    fn errors_carry_field_paths() {
        let bad = MINIMAL.replace("b = 4.0", "b = 0.5");
        match ScenarioConfig::from_toml_str(&bad) {
            Err(RunnerError::Config(c)) => assert_eq!(c.path, "model.b"),
            other => panic!("{other:?}"),
        }
        let bad = format!("{MINIMAL}[solver]\ndt = -1.0\n");
        match ScenarioConfig::from_toml_str(&bad) {
            Err(RunnerError::Config(c)) => assert_eq!(c.path, "solver.dt"),
            other => panic!("{other:?}"),
        }
        let bad = format!("{MINIMAL}[diagnostics.schedule]\nstep = 0.0\n");
        match ScenarioConfig::from_toml_str(&bad) {
            Err(RunnerError::Config(c)) => assert_eq!(c.path, "diagnostics.schedule.step"),
            other => panic!("{other:?}"),
        }
        let bad = format!("{MINIMAL}[solver]\nbogus = 1\n");
        assert!(matches!(
            ScenarioConfig::from_toml_str(&bad),
            Err(RunnerError::Config(_))
        ));
        let bad = MINIMAL.replace("schema_version = 1", "schema_version = 7");
        match ScenarioConfig::from_toml_str(&bad) {
            Err(RunnerError::Config(c)) => assert_eq!(c.path, "schema_version"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parameter_paths() {
        let cfg = ScenarioConfig::from_toml_str(MINIMAL).unwrap();
        let c = cfg.with_parameter("model.b", 4.5).unwrap();
        assert!(matches!(c.model, ModelConfig::Calabi { b, .. } if b == 4.5));
        let c = cfg.with_parameter("solver.dt", 5e-4).unwrap();
        assert_eq!(c.solver.dt, 5e-4);
        let c = cfg.with_parameter("model.points", 1025.0).unwrap();
        assert!(matches!(c.model, ModelConfig::Calabi { points: 1025, .. }));
        assert!(cfg.with_parameter("model.points", 10.5).is_err());
        assert!(cfg.with_parameter("model.nothing.here", 1.0).is_err());
        assert!(cfg.with_parameter("model.b", 0.5).is_err());

        let prod = r#"
schema_version = 1
[scenario]
name = "p"
[model]
type = "product"
factors = ["P1", "P1"]
c0 = [1.0, 2.0]
"#;
        let cfg = ScenarioConfig::from_toml_str(prod).unwrap();
        let c = cfg.with_parameter("model.c0.1", 3.0).unwrap();
        assert!(matches!(c.model, ModelConfig::Product { ref c0, .. } if c0 == &vec![1.0, 3.0]));
        let c = cfg.with_parameter("diagnostics.d_threshold", 7.0).unwrap();
        assert_eq!(c.diagnostics.d_threshold, Some(7.0));
    }

    #[test]
    fn round_trip_through_toml() {
        let cfg = ScenarioConfig::from_toml_str(MINIMAL).unwrap();
        let again = ScenarioConfig::from_toml_str(&cfg.to_toml_string()).unwrap();
        assert_eq!(cfg, again);
    }
}
