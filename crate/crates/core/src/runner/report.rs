//! Digest of finished runs.
//!
//! Inputs may be run directories (holding `summary.json`), sweep
//! directories (holding `index.json`), output roots whose subdirectories
//! are runs, or the JSON files themselves.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use super::{fmt_float, io_error, ExitStatus, RunnerError};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub source: PathBuf,
    pub scenario: String,
    pub singular_time: Option<f64>,
    pub k: Option<u64>,
    pub regime: String,
    pub k_fit: Option<f64>,
    /// Extremes of the `lambda_min` column of `timeseries.csv`.
    pub lambda_min_low: Option<f64>,
    pub lambda_min_high: Option<f64>,
    pub status: String,
    pub consistent: Option<bool>,
    pub problem: Option<String>,
}

impl ReportRow {
    fn missing(source: PathBuf, problem: String) -> Self {
        Self {
            scenario: source.display().to_string(),
            source,
            singular_time: None,
            k: None,
            regime: String::new(),
            k_fit: None,
            lambda_min_low: None,
            lambda_min_high: None,
            status: "missing".into(),
            consistent: None,
            problem: Some(problem),
        }
    }

    pub fn exit_status(&self) -> ExitStatus {
        if self.problem.is_some() && self.status == "missing" {
            return ExitStatus::ConfigError;
        }
        match self.status.as_str() {
            "ok" => ExitStatus::Success,
            "kaehler-violation" | "solver-failure" => ExitStatus::KaehlerViolation,
            "inconsistent" => ExitStatus::Inconsistent,
            _ => ExitStatus::ConfigError,
        }
    }

    pub fn flagged(&self) -> bool {
        self.exit_status() != ExitStatus::Success
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub rows: Vec<ReportRow>,
}

fn opt(x: Option<f64>, prec: usize) -> String {
    match x {
        Some(v) => format!("{v:.prec$}"),
        None => "-".into(),
    }
}

impl Report {
    pub fn exit_status(&self) -> ExitStatus {
        self.rows
            .iter()
            .map(ReportRow::exit_status)
            .fold(ExitStatus::Success, ExitStatus::worst)
    }

    /// Fixed-width table; flagged rows start with `!!`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "   {:<28} {:>10} {:>2} {:<20} {:>8} {:>12} {:>12}  status",
            "scenario", "T", "K", "regime", "K_fit", "lmin_low", "lmin_high"
        );
        for r in &self.rows {
            let mark = if r.flagged() { "!!" } else { "  " };
            let t = match r.singular_time {
                Some(t) => format!("{t:.6}"),
                None if r.problem.is_none() => "inf".into(),
                None => "-".into(),
            };
            let k = r.k.map(|k| k.to_string()).unwrap_or_else(|| "-".into());
            let _ = write!(
                out,
                "{mark} {:<28} {:>10} {:>2} {:<20} {:>8} {:>12} {:>12}  {}",
                r.scenario,
                t,
                k,
                r.regime,
                opt(r.k_fit, 4),
                opt(r.lambda_min_low, 4),
                opt(r.lambda_min_high, 4),
                r.status
            );
            if let Some(p) = &r.problem {
                let _ = write!(out, " ({p})");
            }
            out.push('\n');
        }
        out
    }

    /// Writes `report.csv` (the table) into `dir`.
    pub fn write_csv(&self, dir: &Path) -> Result<PathBuf, RunnerError> {
        fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
        let path = dir.join("report.csv");
        let mut w = csv::Writer::from_path(&path).map_err(|e| io_error(&path, e))?;
        let f = |x: Option<f64>| x.map(fmt_float).unwrap_or_default();
        w.write_record([
            "scenario",
            "singular_time",
            "k",
            "regime",
            "k_fit",
            "lambda_min_low",
            "lambda_min_high",
            "status",
            "source",
        ])
        .map_err(|e| io_error(&path, e))?;
        for r in &self.rows {
            w.write_record([
                r.scenario.clone(),
                f(r.singular_time),
                r.k.map(|k| k.to_string()).unwrap_or_default(),
                r.regime.clone(),
                f(r.k_fit),
                f(r.lambda_min_low),
                f(r.lambda_min_high),
                r.status.clone(),
                r.source.display().to_string(),
            ])
            .map_err(|e| io_error(&path, e))?;
        }
        w.flush().map_err(|e| io_error(&path, e))?;
        Ok(path)
    }
}

fn read_json(path: &Path) -> Result<Value, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// `(min, max)` of a column of a CSV file.
fn column_extremes(path: &Path, column: &str) -> Result<(f64, f64), String> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let headers = rdr.headers().map_err(|e| e.to_string())?.clone();
    let idx = headers
        .iter()
        .position(|h| h == column)
        .ok_or_else(|| format!("{}: no column {column}", path.display()))?;
    let mut ext = (f64::INFINITY, f64::NEG_INFINITY);
    for rec in rdr.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        let v: f64 = rec
            .get(idx)
            .unwrap_or("")
            .parse()
            .map_err(|_| format!("{}: bad number in {column}", path.display()))?;
        ext = (ext.0.min(v), ext.1.max(v));
    }
    Ok(ext)
}

fn summary_row(summary_path: &Path) -> ReportRow {
    let json = match read_json(summary_path) {
        Ok(j) => j,
        Err(e) => return ReportRow::missing(summary_path.to_path_buf(), e),
    };
    let dir = summary_path.parent().unwrap_or(Path::new("."));
    let csv_path = dir.join("timeseries.csv");
    let (ext, problem) = match column_extremes(&csv_path, "lambda_min") {
        Ok(e) => (Some(e), None),
        Err(e) => (None, Some(e)),
    };
    ReportRow {
        source: dir.to_path_buf(),
        scenario: json["scenario"].as_str().unwrap_or("?").to_string(),
        singular_time: json["singular_time"].as_f64(),
        k: json["k"].as_u64(),
        regime: json["regime"].as_str().unwrap_or("?").to_string(),
        k_fit: json["fit"]["k_fit"].as_f64(),
        lambda_min_low: ext.map(|e| e.0),
        lambda_min_high: ext.map(|e| e.1),
        status: if problem.is_some() {
            "missing".into()
        } else {
            json["status"].as_str().unwrap_or("?").to_string()
        },
        consistent: json["verdicts"]["consistent"].as_bool(),
        problem,
    }
}

fn index_rows(index_path: &Path) -> Vec<ReportRow> {
    let json = match read_json(index_path) {
        Ok(j) => j,
        Err(e) => return vec![ReportRow::missing(index_path.to_path_buf(), e)],
    };
    let dir = index_path.parent().unwrap_or(Path::new("."));
    json["points"]
        .as_array()
        .map(|points| {
            points
                .iter()
                .map(|p| {
                    let run_dir = dir.join(p["dir"].as_str().unwrap_or(""));
                    let mut row = summary_row(&run_dir.join("summary.json"));
                    if let (Some(err), "missing") = (p["error"].as_str(), row.status.as_str()) {
                        row.problem = Some(err.to_string());
                        row.scenario = p["scenario"].as_str().unwrap_or("?").to_string();
                    }
                    row
                })
                .collect()
        })
        .unwrap_or_default()
}

fn rows_for(path: &Path) -> Vec<ReportRow> {
    if path.is_file() {
        return match path.file_name().and_then(|n| n.to_str()) {
            Some("index.json") => index_rows(path),
            _ => vec![summary_row(path)],
        };
    }
    if path.is_dir() {
        if path.join("summary.json").is_file() {
            return vec![summary_row(&path.join("summary.json"))];
        }
        if path.join("index.json").is_file() {
            return index_rows(&path.join("index.json"));
        }
        let mut subdirs: Vec<PathBuf> = fs::read_dir(path)
            .map(|it| {
                it.filter_map(|e| e.ok().map(|e| e.path()))
                    .filter(|p| p.is_dir())
                    .collect()
            })
            .unwrap_or_default();
        subdirs.sort();
        let rows: Vec<ReportRow> = subdirs
            .iter()
            .filter(|d| d.join("summary.json").is_file() || d.join("index.json").is_file())
            .flat_map(|d| rows_for(d))
            .collect();
        if !rows.is_empty() {
            return rows;
        }
    }
    vec![ReportRow::missing(
        path.to_path_buf(),
        "no summary.json or index.json found".into(),
    )]
}

/// One row per run found under `paths`.
pub fn report(paths: &[PathBuf]) -> Report {
    Report {
        rows: paths.iter().flat_map(|p| rows_for(p)).collect(),
    }
}
