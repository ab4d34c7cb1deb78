//! `analyze` and `run`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use crate::cohomology::CohClass;
use crate::diagnostics::{
    fit_exponents, ricci_fields, summarize, verdicts, CohomologySummary, FitReport, Regime,
    Verdicts,
};
use crate::error::FlowError;
use crate::models::CalabiProfile;
use crate::solver::{self, Snapshot, Trajectory};

use super::config::{ModelConfig, ScenarioConfig, SCHEMA_VERSION};
use super::{fmt_float, io_error, ExitStatus, RunnerError};

/// Cohomology-only report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Analysis {
    pub scenario: String,
    pub model: ModelConfig,
    #[serde(flatten)]
    pub cohomology: CohomologySummary,
}

impl Analysis {
    pub fn render(&self) -> String {
        let c = &self.cohomology;
        let mut out = String::new();
        let fmt_class = |k: &CohClass| {
            let parts: Vec<String> = k.0.iter().map(|x| format!("{x:.6}")).collect();
            format!("({})", parts.join(", "))
        };
        let _ = writeln!(out, "scenario     {}", self.scenario);
        let _ = writeln!(out, "basis        {}", c.basis.join(", "));
        let _ = writeln!(out, "c1           {}", fmt_class(&c.c1));
        let _ = writeln!(out, "omega0       {}", fmt_class(&c.omega0));
        match c.singular_time {
            Some(t) => {
                let _ = writeln!(
                    out,
                    "T            {t:.12} (s = {:.12}), active facets: {}",
                    c.singular_time_s.unwrap_or(f64::NAN),
                    c.active_facets.join(", ")
                );
            }
            None => {
                let _ = writeln!(out, "T            infinity");
            }
        }
        let _ = writeln!(
            out,
            "limit class  {} (facet margin {:.6})",
            fmt_class(&c.limit_class),
            c.limit_margin
        );
        let mixed: Vec<String> = c.collapse.mixed.iter().map(|m| format!("{m:.6}")).collect();
        let _ = writeln!(out, "K            {} (mixed intersections {})", c.k(), mixed.join(", "));
        let _ = writeln!(out, "c1^n         {:.6}", c.c1_top);
        let _ = writeln!(
            out,
            "omega0 + c1  nef = {} (margin {:.6})",
            c.omega0_plus_c1_nef.nef, c.omega0_plus_c1_nef.margin
        );
        let _ = writeln!(out, "regime       {}", c.regime.tag());
        let _ = writeln!(out, "volume       t            [omega_t]^n");
        for (t, v) in &c.volume_samples {
            let _ = writeln!(out, "             {t:<12.6} {v:.9}");
        }
        out
    }
}

pub fn analyze(cfg: &ScenarioConfig) -> Result<Analysis, RunnerError> {
    let setup = cfg.build_model()?.setup()?;
    Ok(Analysis {
        scenario: cfg.scenario.name.clone(),
        model: cfg.model.clone(),
        cohomology: summarize(&setup)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Ok,
    KaehlerViolation,
    SolverFailure,
    Inconsistent,
}

impl RunStatus {
    pub fn exit_status(self) -> ExitStatus {
        match self {
            RunStatus::Ok => ExitStatus::Success,
            RunStatus::KaehlerViolation | RunStatus::SolverFailure => ExitStatus::KaehlerViolation,
            RunStatus::Inconsistent => ExitStatus::Inconsistent,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuntimeInfo {
    pub completed: bool,
    pub failure: Option<String>,
    /// Time of the step that failed; an empirical singular time when the
    /// failure is a Kähler violation.
    pub failure_time: Option<f64>,
    pub stop_time: f64,
    pub last_time: f64,
    pub steps: usize,
    pub samples: usize,
    pub wall_seconds: f64,
    pub version: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub schema_version: u32,
    pub scenario: String,
    pub description: String,
    pub model: ModelConfig,
    /// `null` when the flow is immortal.
    pub singular_time: Option<f64>,
    pub limit_class: CohClass,
    pub k: usize,
    pub regime: Regime,
    /// `(min, max)` of the `lambda_min` column.
    pub lambda_min_range: (f64, f64),
    pub cohomology: CohomologySummary,
    pub fit: FitReport,
    pub verdicts: Verdicts,
    pub status: RunStatus,
    pub exit_code: i32,
    pub runtime: RuntimeInfo,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub summary: RunSummary,
    pub trajectory: Trajectory,
    /// Directory holding the run's files, if written.
    pub dir: Option<PathBuf>,
}

impl RunOutcome {
    pub fn exit_status(&self) -> ExitStatus {
        self.summary.status.exit_status()
    }
}

fn failure_time(e: &FlowError) -> Option<f64> {
    match e {
        FlowError::KaehlerViolation { t, .. } | FlowError::NewtonFailure { t, .. } => Some(*t),
        FlowError::FactorVanished { t, .. } => Some(*t),
        _ => None,
    }
}

/// Runs the scenario in memory.
pub fn simulate(cfg: &ScenarioConfig) -> Result<RunOutcome, RunnerError> {
    let model = cfg.build_model()?;
    let setup = model.setup()?;
    let cohomology = summarize(&setup)?;
    let times = cfg.sample_times()?;
    let start = Instant::now();
    let trajectory = solver::run(&model, &cfg.solver, &cfg.diagnostics, &times)?;
    let wall_seconds = start.elapsed().as_secs_f64();

    let fit = fit_exponents(&trajectory);
    let verdicts = verdicts(&trajectory, &cohomology, &fit, &cfg.diagnostics);
    let status = match &trajectory.failure {
        Some(FlowError::KaehlerViolation { .. }) => RunStatus::KaehlerViolation,
        Some(_) => RunStatus::SolverFailure,
        None if !verdicts.consistent => RunStatus::Inconsistent,
        None => RunStatus::Ok,
    };
    let lambda_min_range = trajectory
        .records()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            (lo.min(r.lambda_min), hi.max(r.lambda_min))
        });
    let summary = RunSummary {
        schema_version: SCHEMA_VERSION,
        scenario: cfg.scenario.name.clone(),
        description: cfg.scenario.description.clone(),
        model: cfg.model.clone(),
        singular_time: cohomology.singular_time,
        limit_class: cohomology.limit_class.clone(),
        k: cohomology.k(),
        regime: cohomology.regime,
        lambda_min_range,
        runtime: RuntimeInfo {
            completed: trajectory.completed(),
            failure: trajectory.failure.as_ref().map(|e| e.to_string()),
            failure_time: trajectory.failure.as_ref().and_then(failure_time),
            stop_time: trajectory.stop_time,
            last_time: trajectory.samples.last().map(|s| s.t).unwrap_or(0.0),
            steps: trajectory.steps,
            samples: trajectory.samples.len(),
            wall_seconds,
            version: env!("CARGO_PKG_VERSION"),
        },
        cohomology,
        fit,
        verdicts,
        exit_code: status.exit_status().code(),
        status,
    };
    Ok(RunOutcome {
        summary,
        trajectory,
        dir: None,
    })
}

/// Runs the scenario and writes its files under `<root>/<name>/`.
pub fn run_scenario(cfg: &ScenarioConfig, root: &Path) -> Result<RunOutcome, RunnerError> {
    let mut outcome = simulate(cfg)?;
    let dir = root.join(&cfg.scenario.name);
    write_outputs(&dir, &outcome, cfg)?;
    outcome.dir = Some(dir);
    Ok(outcome)
}

/// Column names of `timeseries.csv`.
pub fn csv_header(basis: &[String], alphas: &[f64]) -> Vec<String> {
    let mut cols = vec!["t".to_string(), "s".to_string()];
    cols.extend(basis.iter().map(|b| format!("class_{b}")));
    cols.extend(
        [
            "volume_coh",
            "volume_num",
            "lambda_min",
            "lambda_max",
            "trace_max",
            "sup_u",
            "inf_u",
            "sup_udot_u",
            "inf_udot_u",
            "metric_ratio_min",
            "metric_ratio_max",
        ]
        .iter()
        .map(|s| s.to_string()),
    );
    cols.extend(alphas.iter().map(|a| format!("alpha_integral_{a}")));
    cols
}

/// Writes `timeseries.csv`, `summary.json` and, if requested, `grid.csv`.
pub fn write_outputs(
    dir: &Path,
    outcome: &RunOutcome,
    cfg: &ScenarioConfig,
) -> Result<(), RunnerError> {
    fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    let summary = &outcome.summary;
    let traj = &outcome.trajectory;

    let csv_path = dir.join("timeseries.csv");
    let alphas: Vec<f64> = traj
        .samples
        .first()
        .map(|s| s.record.alpha_integrals.iter().map(|(a, _)| *a).collect())
        .unwrap_or_default();
    let mut w = csv::Writer::from_path(&csv_path).map_err(|e| io_error(&csv_path, e))?;
    w.write_record(csv_header(&summary.cohomology.basis, &alphas))
        .map_err(|e| io_error(&csv_path, e))?;
    for r in traj.records() {
        let mut row = vec![fmt_float(r.t), fmt_float(r.s)];
        row.extend(r.class.iter().map(|x| fmt_float(*x)));
        row.extend(
            [
                r.volume_coh,
                r.volume_num,
                r.lambda_min,
                r.lambda_max,
                r.trace_max,
                r.sup_u,
                r.inf_u,
                r.sup_udot_u,
                r.inf_udot_u,
                r.metric_ratio_min,
                r.metric_ratio_max,
            ]
            .iter()
            .map(|x| fmt_float(*x)),
        );
        row.extend(r.alpha_integrals.iter().map(|(_, v)| fmt_float(*v)));
        w.write_record(&row).map_err(|e| io_error(&csv_path, e))?;
    }
    w.flush().map_err(|e| io_error(&csv_path, e))?;

    let json_path = dir.join("summary.json");
    let text = serde_json::to_string_pretty(summary).map_err(|e| io_error(&json_path, e))?;
    fs::write(&json_path, text + "\n").map_err(|e| io_error(&json_path, e))?;

    if cfg.output.grid_dump {
        if let Some(Snapshot::Calabi(p)) = traj.samples.last().map(|s| &s.snapshot) {
            write_grid(&dir.join("grid.csv"), p, cfg.diagnostics.eig_floor)?;
        }
    }
    Ok(())
}

/// Final Calabi profile: `rho, u, F1, F2` and the two Ricci eigenvalue
/// fields (empty outside the trusted window).
fn write_grid(path: &Path, p: &CalabiProfile, eig_floor: f64) -> Result<(), RunnerError> {
    let (f1, f2) = p.derivatives();
    let fields = ricci_fields(p, eig_floor).ok();
    let mut w = csv::Writer::from_path(path).map_err(|e| io_error(path, e))?;
    w.write_record(["rho", "u", "F1", "F2", "ricci_tangential", "ricci_radial"])
        .map_err(|e| io_error(path, e))?;
    let mut k = 0;
    for j in 0..p.u.len() {
        let (tan, rad) = match &fields {
            Some(f) if f.index.get(k) == Some(&j) => {
                k += 1;
                (fmt_float(f.tangential[k - 1]), fmt_float(f.radial[k - 1]))
            }
            _ => (String::new(), String::new()),
        };
        w.write_record([
            fmt_float(p.grid.rho[j]),
            fmt_float(p.u[j]),
            fmt_float(f1[j]),
            fmt_float(f2[j]),
            tan,
            rad,
        ])
        .map_err(|e| io_error(path, e))?;
    }
    w.flush().map_err(|e| io_error(path, e))
}
