//! Cohomology-only analysis of every bundled scenario: singular time, limit
//! class, collapse exponent and regime, with no PDE solve.
//!
//! ```text
//! cargo run --example analyze_catalog            # table of all scenarios
//! cargo run --example analyze_catalog f1-fiber   # full report for one
//! ```

use krflow::runner::{analyze, catalog};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    if let Some(name) = std::env::args().nth(1) {
        print!("{}", analyze(&catalog::get(&name)?)?.render());
        return Ok(());
    }
    println!(
        "{:<16} {:>10} {:>12}  {:<24} K  regime",
        "scenario", "T", "s(T)", "limit class"
    );
    for cfg in catalog::all() {
        let a = analyze(&cfg)?;
        let c = &a.cohomology;
        let (t, s) = match (c.singular_time, c.singular_time_s) {
            (Some(t), Some(s)) => (format!("{t:.6}"), format!("{s:.6}")),
            _ => ("inf".into(), "inf".into()),
        };
        let limit: Vec<String> = c.limit_class.0.iter().map(|x| format!("{x:.4}")).collect();
        println!(
            "{:<16} {:>10} {:>12}  {:<24} {}  {}",
            a.scenario,
            t,
            s,
            format!("({})", limit.join(", ")),
            c.k(),
            c.regime.tag()
        );
    }
    Ok(())
}
