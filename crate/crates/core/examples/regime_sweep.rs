//! Parameter sweeps across the 𝔽₁ regime boundary `b = 3a`.
//!
//! Sweeps `b ∈ {3.5, 4, 4.5}` at `a = 1` (the contraction time `log 2` does not
//! depend on `b`) and `a ∈ {1.5, 2, 2.5}` at `b = 5` (K jumps from 0 to 1),
//! running the grid points concurrently. Output goes to `KRFLOW_OUT` or
//! `./out`.
//!
//! ```text
//! cargo run --release --example regime_sweep
//! ```

use krflow::runner::{catalog, sweep, SweepConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (name, parameter, values) in [
        ("f1-contract", "model.b", vec![3.5, 4.0, 4.5]),
        ("f1-fiber", "model.a", vec![1.5, 2.0, 2.5]),
    ] {
        let cfg = catalog::get(name)?;
        let root = cfg.output_root(None);
        let axis = SweepConfig {
            parameter: parameter.into(),
            values,
        };
        let index = sweep(&cfg, &axis, &root, 0)?;
        println!("{name}: sweep over {parameter}, index in {}", root.join(format!("{name}-sweep")).display());
        for p in &index.points {
            println!(
                "  {parameter} = {:<4} T = {:.6}  K = {}  K_fit = {:.3}  {:?}",
                p.value,
                p.singular_time.unwrap_or(f64::INFINITY),
                p.k.map(|k| k.to_string()).unwrap_or_else(|| "-".into()),
                p.k_fit.unwrap_or(f64::NAN),
                p.status
            );
        }
    }
    Ok(())
}
