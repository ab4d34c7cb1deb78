//! The Calabi-reduced flow on 𝔽₁ through a finite-time singularity.
//!
//! With `b > 3a` the exceptional curve is contracted at `T = log(a + 1)`
//! while the volume stays positive, and the Ricci curvature is unbounded
//! below near `T`. With `b < 3a` the fibers collapse instead. Pass `a b` to
//! choose the class `bH - aE` (default `1 4`).
//!
//! ```text
//! cargo run --release --example calabi_contraction
//! cargo run --release --example calabi_contraction -- 2 5
//! ```

use krflow::cohomology::singularity_time;
use krflow::diagnostics::{fit_exponents, DiagnosticsConfig};
use krflow::models::{CalabiModel, Model};
use krflow::solver::{run, SolverConfig};

fn main() -> krflow::Result<()> {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .map(|s| s.parse().expect("numeric a and b"))
        .collect();
    let (a, b) = match args[..] {
        [a, b] => (a, b),
        _ => (1.0, 4.0),
    };
    let calabi = CalabiModel::with_defaults(a, b)?;
    let model = Model::Calabi(calabi);
    let sing = singularity_time(&model.setup()?)?;
    println!("class {b}H - {a}E, T = {:.6}", sing.time);

    let cfg = SolverConfig::default();
    let diag = DiagnosticsConfig::default();
    let times = diag.schedule.times(sing.time, &cfg)?;
    let traj = run(&model, &cfg, &diag, &times)?;
    if let Some(e) = &traj.failure {
        println!("stopped early: {e}");
    }

    println!("\n  T - t       lambda_min   volume(num)  volume(coh)  inf(u_t + u)  slopes F'(-L), F'(L) vs (a_t, b_t)");
    for s in traj.samples.iter().step_by(4).chain(traj.samples.last()) {
        let r = &s.record;
        let slopes = match &s.snapshot {
            krflow::solver::Snapshot::Calabi(p) => {
                let (f1, _) = p.derivatives();
                (f1[0], f1[f1.len() - 1])
            }
            _ => (f64::NAN, f64::NAN),
        };
        let (at, bt) = calabi.slopes_at(s.t);
        println!(
            "{:9.2e}  {:11.4}  {:11.6}  {:11.6}  {:11.4}   ({:.6}, {:.6}) vs ({:.6}, {:.6})",
            sing.time - s.t,
            r.lambda_min,
            r.volume_num,
            r.volume_coh,
            r.inf_udot_u,
            slopes.0,
            slopes.1,
            at,
            bt
        );
    }

    let fit = fit_exponents(&traj);
    println!("\nK_fit = {:.4} (plain slope {:.4}), beta_fit = {:.4}, slope of inf(u_t + u) vs log(T-t) = {:.4}",
        fit.k_fit.unwrap_or(f64::NAN),
        fit.k_slope_plain.unwrap_or(f64::NAN),
        fit.beta_fit.unwrap_or(f64::NAN),
        fit.voll_slope.unwrap_or(f64::NAN));
    println!("lambda_min near T:");
    for e in &fit.lambda_blowup {
        println!("  T - t = {:.0e}: {:.4}", e.tau, e.lambda_min);
    }
    Ok(())
}
