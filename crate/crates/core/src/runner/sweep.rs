//! One-axis parameter sweeps, run concurrently.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use super::config::{ScenarioConfig, SweepConfig};
use super::run::{run_scenario, RunStatus};
use super::{io_error, ExitStatus, RunnerError};
use crate::diagnostics::Regime;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub value: f64,
    pub scenario: String,
    /// Run directory relative to the index file.
    pub dir: PathBuf,
    pub status: Option<RunStatus>,
    pub exit_code: i32,
    pub singular_time: Option<f64>,
    pub k: Option<usize>,
    pub regime: Option<Regime>,
    pub k_fit: Option<f64>,
    pub consistent: Option<bool>,
    /// Set when the point could not be run at all.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepIndex {
    pub scenario: String,
    pub parameter: String,
    pub points: Vec<SweepPoint>,
    /// Worst exit status over the points.
    pub exit_code: i32,
}

impl SweepIndex {
    pub fn exit_status(&self) -> ExitStatus {
        self.points
            .iter()
            .map(|p| match p.exit_code {
                0 => ExitStatus::Success,
                2 => ExitStatus::KaehlerViolation,
                3 => ExitStatus::Inconsistent,
                _ => ExitStatus::ConfigError,
            })
            .fold(ExitStatus::Success, ExitStatus::worst)
    }
}

fn point_name(base: &str, parameter: &str, value: f64) -> String {
    let field = parameter.rsplit('.').next().unwrap_or(parameter);
    format!("{base}@{field}={value}")
}

/// Runs every grid point of `axis` on a pool of `jobs` threads (`0` picks
/// the number of cores) and writes `<root>/<name>-sweep/index.json`.
/// Failures are recorded per point; the sweep itself only fails on I/O.
pub fn sweep(
    cfg: &ScenarioConfig,
    axis: &SweepConfig,
    root: &Path,
    jobs: usize,
) -> Result<SweepIndex, RunnerError> {
    let sweep_dir = root.join(format!("{}-sweep", cfg.scenario.name));
    fs::create_dir_all(&sweep_dir).map_err(|e| io_error(&sweep_dir, e))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| io_error(&sweep_dir, e))?;

    let points: Vec<SweepPoint> = pool.install(|| {
        axis.values
            .par_iter()
            .map(|&value| {
                let name = point_name(&cfg.scenario.name, &axis.parameter, value);
                let mut point = SweepPoint {
                    value,
                    scenario: name.clone(),
                    dir: PathBuf::from(&name),
                    status: None,
                    exit_code: ExitStatus::ConfigError.code(),
                    singular_time: None,
                    k: None,
                    regime: None,
                    k_fit: None,
                    consistent: None,
                    error: None,
                };
                let result = cfg.with_parameter(&axis.parameter, value).and_then(|mut c| {
                    c.scenario.name = name.clone();
                    c.sweep = None;
                    run_scenario(&c, &sweep_dir)
                });
                match result {
                    Ok(out) => {
                        let s = &out.summary;
                        point.status = Some(s.status);
                        point.exit_code = s.exit_code;
                        point.singular_time = s.singular_time;
                        point.k = Some(s.k);
                        point.regime = Some(s.regime);
                        point.k_fit = s.fit.k_fit;
                        point.consistent = Some(s.verdicts.consistent);
                        if let Some(f) = &s.runtime.failure {
                            point.error = Some(f.clone());
                        }
                    }
                    Err(e) => {
                        point.exit_code = e.exit_status().code();
                        point.error = Some(e.to_string());
                    }
                }
                point
            })
            .collect()
    });

    let mut index = SweepIndex {
        scenario: cfg.scenario.name.clone(),
        parameter: axis.parameter.clone(),
        points,
        exit_code: 0,
    };
    index.exit_code = index.exit_status().code();
    let path = sweep_dir.join("index.json");
    let text = serde_json::to_string_pretty(&index).map_err(|e| io_error(&path, e))?;
    fs::write(&path, text + "\n").map_err(|e| io_error(&path, e))?;
    Ok(index)
}
