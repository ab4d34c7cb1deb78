//! Exact flows on products of Kähler–Einstein curves.
//!
//! Each factor coefficient solves `ċ = -κ - c`. The example prints the
//! coefficients, Ricci eigenvalues `κ/c` and total volume along the flow for
//! ℙ¹×ℙ¹ (finite-time collapse) and Σ₂×T² (immortal, collapsing torus), then
//! the fitted volume exponents.
//!
//! ```text
//! cargo run --example product_flows
//! ```

use krflow::cohomology::{class_at, singularity_time};
use krflow::diagnostics::{fit_exponents, DiagnosticsConfig};
use krflow::models::{CurveKind, Model, ProductModel};
use krflow::solver::{run, SolverConfig};

fn show(name: &str, model: ProductModel) -> krflow::Result<()> {
    let setup = model.setup()?;
    let sing = singularity_time(&setup)?;
    println!("== {name}: T = {}", sing.time);
    let horizon = if sing.is_finite() { sing.time } else { 10.0 };
    for i in 0..=5 {
        let t = horizon * i as f64 / 5.0 * 0.999;
        let state = model.exact_state(t)?;
        let eigs = model.ricci_eigs_of(&state);
        println!(
            "t = {t:7.4}  c = {:?}  class = {:?}  Ric eigs = {:?}  vol = {:.6}",
            state.coeffs.iter().map(|c| (c * 1e6).round() / 1e6).collect::<Vec<_>>(),
            class_at(&setup, t)?.0.iter().map(|c| (c * 1e6).round() / 1e6).collect::<Vec<_>>(),
            eigs.per_factor.iter().map(|c| (c * 1e4).round() / 1e4).collect::<Vec<_>>(),
            model.volume(&state)
        );
    }
    let m = Model::Product(model);
    let cfg = SolverConfig::default();
    let diag = DiagnosticsConfig::default();
    let times = diag.schedule.times(sing.time, &cfg)?;
    let fit = fit_exponents(&run(&m, &cfg, &diag, &times)?);
    println!(
        "K_fit = {:.4} (plain slope {:.4}), beta_fit = {:.4}\n",
        fit.k_fit.unwrap_or(f64::NAN),
        fit.k_slope_plain.unwrap_or(f64::NAN),
        fit.beta_fit.unwrap_or(f64::NAN)
    );
    Ok(())
}

fn main() -> krflow::Result<()> {
    use CurveKind::*;
    show(
        "P1 x P1, (1, 2)",
        ProductModel::from_kinds(&[ProjectiveLine, ProjectiveLine], &[1.0, 2.0])?,
    )?;
    show(
        "P1 x P1, (1, 1)",
        ProductModel::from_kinds(&[ProjectiveLine, ProjectiveLine], &[1.0, 1.0])?,
    )?;
    show(
        "Sigma2 x T2, (3, 1)",
        ProductModel::from_kinds(&[Genus2, Torus], &[3.0, 1.0])?,
    )?;
    show(
        "P1 x T2 x Sigma2, (1, 1, 3)",
        ProductModel::from_kinds(&[ProjectiveLine, Torus, Genus2], &[1.0, 1.0, 3.0])?,
    )
}
