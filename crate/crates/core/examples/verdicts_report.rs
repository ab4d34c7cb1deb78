//! Runs the whole bundled suite, writes each run's files, and prints the
//! verdicts and the summary table.
//!
//! The two implications checked per run: a finite-time non-collapsed
//! singularity never has a uniform Ricci lower bound, and an immortal flow
//! that is singular at infinity with `Ric ≥ -ω̃` has `c₁ⁿ = 0` and
//! `[ω₀] + c₁` nef.
//!
//! ```text
//! cargo run --release --example verdicts_report
//! ```

use krflow::runner::{catalog, report, run_scenario};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut dirs = Vec::new();
    for cfg in catalog::all() {
        let root = cfg.output_root(None);
        let out = run_scenario(&cfg, &root)?;
        let v = &out.summary.verdicts;
        println!(
            "{:<14} finite_T={:<5} K=0:{:<5} ricci_bounded={:<5} (D = {:.3}, min lambda = {:.3}) blowup={:?} consistent={}",
            out.summary.scenario,
            v.finite_t,
            v.noncollapsed,
            v.ricci_bounded,
            v.d_threshold,
            v.lambda_min_overall,
            v.blowup_detected,
            v.consistent
        );
        dirs.extend(out.dir);
    }
    let rep = report(&dirs);
    println!("\n{}", rep.render());
    std::process::exit(rep.exit_status().code());
}
