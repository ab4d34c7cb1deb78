use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use krflow::runner::{catalog, report, run_scenario, OUT_ENV};
use serde_json::Value;
use tempfile::TempDir;

fn krflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_krflow"))
        .args(args)
        .env_remove(OUT_ENV)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

/// Bundled scenario text with `extra` appended to the named section.
fn variant(name: &str, section: &str, extra: &str) -> String {
    let text = catalog::source(name).unwrap();
    let header = format!("[{section}]\n");
    match text.find(&header) {
        Some(i) => {
            let at = i + header.len();
            format!("{}{extra}\n{}", &text[..at], &text[at..])
        }
        None => format!("{text}\n{header}{extra}\n"),
    }
}

fn write_config(dir: &Path, file: &str, text: &str) -> String {
    let path = dir.join(file);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn analyze_reports_cohomology() {
    let out = krflow(&["analyze", "--scenario", "f1-contract"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("finite-noncollapsed"), "{text}");
    assert!(text.contains("0.693147"), "{text}");

    let out = krflow(&["analyze", "--scenario", "torus2", "--json"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["regime"], "convergent");
    assert!(v["singular_time"].is_null());
}

#[test]
fn config_errors_exit_1_and_name_the_field() {
    let dir = TempDir::new().unwrap();
    let bad = variant("f1-contract", "model", "").replace("b = 4.0", "b = 0.5");
    let path = write_config(dir.path(), "bad.toml", &bad);
    let out = krflow(&["run", "--config", &path, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("model.b"));

    let typo = variant("f1-contract", "solver", "dtt = 0.1");
    let path = write_config(dir.path(), "typo.toml", &typo);
    assert_eq!(code(&krflow(&["analyze", "--config", &path])), 1);
    assert_eq!(code(&krflow(&["analyze", "--scenario", "nope"])), 1);
    assert_eq!(code(&krflow(&["analyze", "--config", "/nonexistent/x.toml"])), 1);
    assert_eq!(code(&krflow(&["run"])), 1);
}

#[test]
fn run_writes_outputs_and_honors_out_precedence() {
    let dir = TempDir::new().unwrap();
    let env_root = dir.path().join("from-env");
    let cli_root = dir.path().join("from-cli");

    let out = Command::new(env!("CARGO_BIN_EXE_krflow"))
        .args(["run", "--scenario", "p1p1-collapse"])
        .env(OUT_ENV, &env_root)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let run_dir = env_root.join("p1p1-collapse");
    assert!(run_dir.join("timeseries.csv").is_file());
    let summary = json(&run_dir.join("summary.json"));
    assert_eq!(summary["k"], 1);
    assert_eq!(summary["status"], "ok");
    assert_eq!(summary["verdicts"]["consistent"], true);

    let out = Command::new(env!("CARGO_BIN_EXE_krflow"))
        .args(["run", "--scenario", "p1p1-collapse", "--out", cli_root.to_str().unwrap()])
        .env(OUT_ENV, &env_root)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(cli_root.join("p1p1-collapse/summary.json").is_file());

    let header = fs::read_to_string(run_dir.join("timeseries.csv")).unwrap();
    assert_eq!(
        header.lines().next().unwrap(),
        "t,s,class_eta1,class_eta2,volume_coh,volume_num,lambda_min,lambda_max,trace_max,\
         sup_u,inf_u,sup_udot_u,inf_udot_u,metric_ratio_min,metric_ratio_max,\
         alpha_integral_0.25,alpha_integral_0.5,alpha_integral_1"
    );
}

#[test]
fn reruns_produce_identical_csv() {
    let dir = TempDir::new().unwrap();
    for sub in ["a", "b"] {
        let root = dir.path().join(sub);
        let out = krflow(&["run", "--scenario", "f1-fiber", "--out", root.to_str().unwrap()]);
        assert_eq!(code(&out), 0);
    }
    let read = |s: &str| fs::read(dir.path().join(s).join("f1-fiber/timeseries.csv")).unwrap();
    assert_eq!(read("a"), read("b"));
}

#[test]
fn inconsistent_verdict_exits_3() {
    // An absurd Ricci threshold declares the contraction run bounded below,
    // which contradicts its finite-time, non-collapsed singularity.
    let dir = TempDir::new().unwrap();
    let text = variant("f1-contract", "diagnostics", "d_threshold = 1e9");
    let path = write_config(dir.path(), "inconsistent.toml", &text);
    let out = krflow(&["run", "--config", &path, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    let summary = json(&dir.path().join("f1-contract/summary.json"));
    assert_eq!(summary["status"], "inconsistent");
    assert_eq!(summary["verdicts"]["finite_time_implication"], false);
}

#[test]
fn kaehler_violation_exits_2_with_partial_outputs() {
    let dir = TempDir::new().unwrap();
    let text = variant("f1-contract", "solver", "scheme = \"explicit\"");
    let path = write_config(dir.path(), "explicit.toml", &text);
    let out = krflow(&["run", "--config", &path, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let run_dir = dir.path().join("f1-contract");
    let summary = json(&run_dir.join("summary.json"));
    assert_eq!(summary["status"], "kaehler-violation");
    assert!(run_dir.join("timeseries.csv").is_file());
}

#[test]
fn sweep_writes_index() {
    let dir = TempDir::new().unwrap();
    let root = dir.path().to_str().unwrap();
    let out = krflow(&[
        "sweep", "--scenario", "f1-fiber", "--out", root, "--jobs", "2", "--param", "model.a",
        "--values", "1.5,2.5",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let index = json(&dir.path().join("f1-fiber-sweep/index.json"));
    let points = index["points"].as_array().unwrap();
    assert_eq!(points.len(), 2);
    let ks: Vec<u64> = points.iter().map(|p| p["k"].as_u64().unwrap()).collect();
    assert_eq!(ks, vec![0, 1]);
    for p in points {
        let d = dir.path().join("f1-fiber-sweep").join(p["dir"].as_str().unwrap());
        assert!(d.join("summary.json").is_file());
    }
}

#[test]
fn empty_sweep_is_a_successful_no_op() {
    let dir = TempDir::new().unwrap();
    let text = catalog::source("p1p1-collapse").unwrap().to_string()
        + "\n[sweep]\nparameter = \"model.c0.0\"\nvalues = []\n";
    let path = write_config(dir.path(), "empty.toml", &text);
    let out = krflow(&["sweep", "--config", &path, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let index = json(&dir.path().join("p1p1-collapse-sweep/index.json"));
    assert_eq!(index["points"].as_array().unwrap().len(), 0);
    assert_eq!(index["exit_code"], 0);
}

#[test]
fn sweep_isolates_failing_points() {
    let dir = TempDir::new().unwrap();
    let root = dir.path().to_str().unwrap();
    // a = 5 > b makes that point invalid; the other still runs.
    let out = krflow(&[
        "sweep", "--scenario", "f1-contract", "--out", root, "--param", "model.a", "--values",
        "1,5",
    ]);
    assert_eq!(code(&out), 1);
    let index = json(&dir.path().join("f1-contract-sweep/index.json"));
    let points = index["points"].as_array().unwrap();
    assert_eq!(points[0]["exit_code"], 0);
    assert_eq!(points[1]["exit_code"], 1);
    assert!(points[1]["error"].as_str().unwrap().contains("model.b"));
}

#[test]
fn report_covers_the_suite_and_flags_failures() {
    let dir = TempDir::new().unwrap();
    let suite = dir.path().join("suite");
    for cfg in catalog::all() {
        run_scenario(&cfg, &suite).unwrap();
    }
    let rep = report(std::slice::from_ref(&suite));
    assert_eq!(rep.rows.len(), 7);
    let regimes: std::collections::BTreeSet<_> = rep.rows.iter().map(|r| r.regime.clone()).collect();
    assert_eq!(regimes.len(), 4);

    let out = krflow(&["report", suite.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(!stdout(&out).contains("!!"));
    assert_eq!(fs::read_to_string(dir.path().join("report.csv")).unwrap().lines().count(), 8);

    let single = krflow(&["report", suite.join("torus2").to_str().unwrap()]);
    assert_eq!(code(&single), 0);
    assert_eq!(stdout(&single).lines().count(), 2);

    let bad_root = dir.path().join("bad");
    let text = variant("f1-contract", "diagnostics", "d_threshold = 1e9");
    let path = write_config(dir.path(), "inconsistent.toml", &text);
    assert_eq!(code(&krflow(&["run", "--config", &path, "--out", bad_root.to_str().unwrap()])), 3);
    let out = krflow(&["report", suite.to_str().unwrap(), bad_root.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    let flagged: Vec<_> = stdout(&out).lines().filter(|l| l.starts_with("!!")).map(String::from).collect();
    assert_eq!(flagged.len(), 1);
    assert!(flagged[0].contains("inconsistent"));

    let missing = krflow(&["report", dir.path().join("nowhere").to_str().unwrap()]);
    assert_eq!(code(&missing), 1);
    assert!(stdout(&missing).contains("missing"));
}

#[test]
fn list_names_every_bundled_scenario() {
    let out = krflow(&["list"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for name in catalog::names() {
        assert!(text.contains(name));
    }
}
