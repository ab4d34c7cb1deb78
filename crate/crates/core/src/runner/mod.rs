//! Scenario configuration, the bundled catalog, end-to-end runs with CSV and
//! JSON output, parameter sweeps and the summary report.
//!
//! Files written per run, under `<root>/<scenario>/`:
//!
//! * `timeseries.csv`: one row per sample, columns `t, s, class_<basis>…,
//!   volume_coh, volume_num, lambda_min, lambda_max, trace_max, sup_u, inf_u,
//!   sup_udot_u, inf_udot_u, metric_ratio_min, metric_ratio_max,
//!   alpha_integral_<α>…`, floats as `{:.12e}`.
//! * `summary.json`: [`RunSummary`].
//! * `grid.csv` (Calabi runs with `output.grid_dump`): the final profile.
//!
//! A sweep writes one run directory per grid point plus `index.json`.

use std::path::PathBuf;

use thiserror::Error;

use crate::error::FlowError;

pub mod catalog;
pub mod config;
pub mod report;
pub mod run;
pub mod sweep;

pub use config::{ConfigError, ModelConfig, ScenarioConfig, SweepConfig, OUT_ENV};
pub use report::{report, Report, ReportRow};
pub use run::{analyze, run_scenario, simulate, write_outputs, Analysis, RunOutcome, RunStatus, RunSummary};
pub use sweep::{sweep, SweepIndex, SweepPoint};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RunnerError {
    #[error("config error: {0}")]
    Config(ConfigError),

    #[error("{}: {message}", path.display())]
    Io { path: PathBuf, message: String },

    #[error("unknown scenario '{0}'; bundled: {list}", list = catalog::names().join(", "))]
    UnknownScenario(String),

    #[error(transparent)]
    Flow(#[from] FlowError),
}

impl RunnerError {
    pub fn exit_status(&self) -> ExitStatus {
        match self {
            RunnerError::Flow(FlowError::KaehlerViolation { .. })
            | RunnerError::Flow(FlowError::NewtonFailure { .. }) => ExitStatus::KaehlerViolation,
            _ => ExitStatus::ConfigError,
        }
    }
}

pub(crate) fn io_error(path: impl Into<PathBuf>, e: impl std::fmt::Display) -> RunnerError {
    RunnerError::Io {
        path: path.into(),
        message: e.to_string(),
    }
}

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExitStatus {
    Success = 0,
    /// Invalid configuration, unreadable input or missing files.
    ConfigError = 1,
    /// The flow broke down before `T - delta_stop`.
    KaehlerViolation = 2,
    /// A verdict implication failed.
    Inconsistent = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }

    /// Combines statuses: config errors dominate, then breakdowns, then
    /// inconsistencies.
    pub fn worst(self, other: ExitStatus) -> ExitStatus {
        let rank = |s: ExitStatus| match s {
            ExitStatus::Success => 0,
            ExitStatus::Inconsistent => 1,
            ExitStatus::KaehlerViolation => 2,
            ExitStatus::ConfigError => 3,
        };
        if rank(other) > rank(self) {
            other
        } else {
            self
        }
    }
}

/// Float format shared by every CSV writer.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.12e}")
}
