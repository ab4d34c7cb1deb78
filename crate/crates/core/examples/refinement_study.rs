//! Grid and time-step refinement for the contraction scenario.
//!
//! Runs `(N, dt)`, `(2N-1, dt/2)`, `(4N-3, dt/4)` to `t = 0.3` and prints the
//! sup-norm change in `u` between consecutive levels with the observed order.
//!
//! ```text
//! cargo run --release --example refinement_study
//! ```

use krflow::diagnostics::DiagnosticsConfig;
use krflow::models::{CalabiModel, Model};
use krflow::solver::{run, time_step_audit, SolverConfig};

fn main() -> krflow::Result<()> {
    let times = [0.1, 0.2, 0.3];
    let diag = DiagnosticsConfig::default();
    let mut levels = Vec::new();
    for level in 0..3u32 {
        let points = (2048 - 1) * 2usize.pow(level) + 1;
        let dt = 1e-3 / 2f64.powi(level as i32);
        let model = Model::Calabi(CalabiModel::new(1.0, 4.0, 15.0, points)?);
        let cfg = SolverConfig {
            dt,
            ..SolverConfig::default()
        };
        let start = std::time::Instant::now();
        let traj = run(&model, &cfg, &diag, &times)?;
        println!(
            "N = {points:>5}, dt = {dt:.2e}: {} steps in {:.2?}",
            traj.steps,
            start.elapsed()
        );
        levels.push(traj);
    }
    let refs: Vec<_> = levels.iter().collect();
    let report = time_step_audit(&refs)?;
    println!("\n     t   |u1-u0|      |u2-u1|      ratio   order");
    for (i, t) in report.times.iter().enumerate() {
        let (d0, d1) = (report.diffs[0][i], report.diffs[1][i]);
        println!(
            "{t:6.2}   {d0:.3e}   {d1:.3e}   {:6.2}  {:5.2}",
            d0 / d1,
            report.orders[0][i]
        );
    }
    Ok(())
}
