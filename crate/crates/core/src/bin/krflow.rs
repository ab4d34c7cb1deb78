//! Command-line front end: `analyze`, `run`, `sweep`, `report`.
//!
//! Exit codes: 0 success, 1 config error, 2 Kähler violation, 3 verdict
//! inconsistency.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use krflow::runner::{self, catalog, ExitStatus, RunnerError, ScenarioConfig, SweepConfig};

#[derive(Parser)]
#[command(name = "krflow", version, about = "Kähler-Ricci flow on symmetric models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// Scenario file (TOML).
    #[arg(long, conflicts_with = "scenario")]
    config: Option<PathBuf>,
    /// Bundled scenario name.
    #[arg(long)]
    scenario: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Cohomology only: singular time, limit class, collapse exponent, regime.
    Analyze {
        #[command(flatten)]
        source: Source,
        /// Print JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Run the flow and write timeseries.csv and summary.json.
    Run {
        #[command(flatten)]
        source: Source,
        /// Output root (overrides KRFLOW_OUT and output.dir).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a parameter grid concurrently and write index.json.
    Sweep {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Dotted parameter path, e.g. model.b (overrides [sweep]).
        #[arg(long, requires = "values")]
        param: Option<String>,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        values: Option<Vec<f64>>,
    },
    /// Summarize finished runs; nonzero exit if any run failed.
    Report {
        /// Run, sweep or output directories, or summary/index files.
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Also write report.csv here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the bundled scenarios.
    List,
}

fn load(source: &Source) -> Result<ScenarioConfig, RunnerError> {
    match (&source.config, &source.scenario) {
        (Some(path), _) => ScenarioConfig::load(path),
        (None, Some(name)) => catalog::get(name),
        (None, None) => Err(RunnerError::Config(runner::ConfigError {
            path: String::new(),
            message: "pass --config <file> or --scenario <name>".into(),
        })),
    }
}

fn execute(cli: Cli) -> Result<ExitStatus, RunnerError> {
    match cli.command {
        Command::Analyze { source, json } => {
            let analysis = runner::analyze(&load(&source)?)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&analysis).expect("serializable"));
            } else {
                print!("{}", analysis.render());
            }
            Ok(ExitStatus::Success)
        }
        Command::Run { source, out } => {
            let cfg = load(&source)?;
            let root = cfg.output_root(out.as_deref());
            let outcome = runner::run_scenario(&cfg, &root)?;
            let s = &outcome.summary;
            println!(
                "{}: {} in {} steps, K = {}, K_fit = {}, status {:?}",
                s.scenario,
                s.regime.tag(),
                s.runtime.steps,
                s.k,
                s.fit.k_fit.map(|k| format!("{k:.4}")).unwrap_or_else(|| "-".into()),
                s.status
            );
            if let Some(f) = &s.runtime.failure {
                eprintln!("run ended early: {f}");
            }
            if let Some(dir) = &outcome.dir {
                println!("wrote {}", dir.display());
            }
            Ok(outcome.exit_status())
        }
        Command::Sweep {
            source,
            out,
            jobs,
            param,
            values,
        } => {
            let cfg = load(&source)?;
            let axis = match (param, values, &cfg.sweep) {
                (Some(parameter), Some(values), _) => SweepConfig { parameter, values },
                (None, Some(values), Some(s)) => SweepConfig {
                    parameter: s.parameter.clone(),
                    values,
                },
                (None, None, Some(s)) => s.clone(),
                _ => {
                    return Err(RunnerError::Config(runner::ConfigError {
                        path: "sweep".into(),
                        message: "no [sweep] section and no --param/--values".into(),
                    }))
                }
            };
            let root = cfg.output_root(out.as_deref());
            let index = runner::sweep(&cfg, &axis, &root, jobs)?;
            for p in &index.points {
                println!(
                    "{:<32} exit {} {}",
                    p.scenario,
                    p.exit_code,
                    p.error.as_deref().unwrap_or("")
                );
            }
            Ok(index.exit_status())
        }
        Command::Report { paths, out } => {
            let report = runner::report(&paths);
            print!("{}", report.render());
            if let Some(dir) = out {
                report.write_csv(&dir)?;
            }
            Ok(report.exit_status())
        }
        Command::List => {
            for cfg in catalog::all() {
                println!("{:<16} {}", cfg.scenario.name, cfg.scenario.description);
            }
            Ok(ExitStatus::Success)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(status) => ExitCode::from(status.code() as u8),
        Err(e) => {
            eprintln!("krflow: {e}");
            ExitCode::from(e.exit_status().code() as u8)
        }
    }
}
