//! Curvature, potential and volume monitors, exponent fits and verdicts.
//!
//! Ricci bounds are read off the eigenvalues of the Ricci endomorphism
//! `g⁻¹Ric`. On products of Kähler–Einstein curves these are `κᵢ/cᵢ(t)`. Under
//! the Calabi ansatz `Ric` has potential `R = 2ρ - log(F′F″)`, and the two
//! eigenvalue fields are `R′/F′` (tangential) and `R″/F″` (radial).

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::cohomology::{
    collapse_exponent, nef_check, singularity_time, time_rescale, volume_poly, CohClass,
    CohomologySetup, CollapseExponent, NefCheck, Singularity,
};
use crate::error::{FlowError, Result};
use crate::models::calabi::trapezoid;
use crate::models::{CalabiModel, CalabiProfile, ProductModel, ProductState};
use crate::solver::{Schedule, Snapshot, Trajectory};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiagnosticsConfig {
    /// Exponents for the monitored exponential integral.
    pub alphas: Vec<f64>,
    /// Ricci lower-bound constant `D`; defaults to `10·|λ_min(0)|`.
    pub d_threshold: Option<f64>,
    /// Curvature fields are read only where `F″ ≥ eig_floor · max F″`; on the
    /// far tails finite differences of `log F″` are dominated by rounding.
    pub eig_floor: f64,
    /// Blow-up needs `λ_min(T-10⁻³) ≤ blowup_ratio · λ_min(T-10⁻²)` ...
    pub blowup_ratio: f64,
    /// ... and `λ_min(T-10⁻³) ≤ blowup_floor`.
    pub blowup_floor: f64,
    /// When records are taken.
    pub schedule: Schedule,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        Self {
            alphas: vec![0.25, 0.5, 1.0],
            d_threshold: None,
            eig_floor: 1e-2,
            blowup_ratio: 2.0,
            blowup_floor: -10.0,
            schedule: Schedule::default(),
        }
    }
}

impl DiagnosticsConfig {
    /// Checks the invariants; errors name the offending field.
    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, msg: String| Err(FlowError::InvalidParameter(format!("{field}: {msg}")));
        if let Some(a) = self.alphas.iter().find(|a| !(**a > 0.0 && **a <= 1.0)) {
            return bad("alphas", format!("alpha must lie in (0, 1], got {a}"));
        }
        if let Some(d) = self.d_threshold {
            if !(d >= 0.0) {
                return bad("d_threshold", format!("must be non-negative, got {d}"));
            }
        }
        if !(self.eig_floor > 0.0 && self.eig_floor < 1.0) {
            return bad("eig_floor", format!("must lie in (0, 1), got {}", self.eig_floor));
        }
        if !(self.blowup_ratio > 0.0) {
            return bad("blowup_ratio", format!("must be positive, got {}", self.blowup_ratio));
        }
        if !self.blowup_floor.is_finite() {
            return bad("blowup_floor", "must be finite".into());
        }
        self.schedule
            .validate()
            .map_err(|e| FlowError::InvalidParameter(format!("schedule.{}", strip_prefix(e))))
    }
}

fn strip_prefix(e: FlowError) -> String {
    match e {
        FlowError::InvalidParameter(m) => m,
        other => other.to_string(),
    }
}

/// Scalar monitors at one sample time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub s: f64,
    pub class: Vec<f64>,
    pub volume_coh: f64,
    pub volume_num: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub trace_max: f64,
    pub sup_u: f64,
    pub inf_u: f64,
    pub sup_udot_u: f64,
    pub inf_udot_u: f64,
    pub metric_ratio_min: f64,
    pub metric_ratio_max: f64,
    /// `(α, value)` pairs.
    pub alpha_integrals: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RicciExtremes {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub trace_max: f64,
    /// Where `λ_min` is attained (`NaN` for products).
    pub rho_at_min: f64,
}

/// Tangential `R′/F′` and radial `R″/F″` eigenvalue fields on the trusted
/// nodes (fourth-order centered differences, `F″ ≥ eig_floor · max F″`).
#[derive(Debug, Clone, PartialEq)]
pub struct RicciFields {
    /// Grid indices of the trusted nodes.
    pub index: Vec<usize>,
    pub rho: Vec<f64>,
    pub tangential: Vec<f64>,
    pub radial: Vec<f64>,
}

pub fn ricci_fields(profile: &CalabiProfile, eig_floor: f64) -> Result<RicciFields> {
    let (f1, f2) = profile.derivatives();
    profile.check_kaehler(&f1, &f2, 0.0)?;
    let rho = profile.rho();
    let h = profile.grid.h;
    let r: Vec<f64> = rho
        .iter()
        .zip(f1.iter().zip(&f2))
        .map(|(x, (a, b))| 2.0 * x - a.ln() - b.ln())
        .collect();
    let mut out = RicciFields {
        index: Vec::new(),
        rho: Vec::new(),
        tangential: Vec::new(),
        radial: Vec::new(),
    };
    let n = r.len();
    let cutoff = eig_floor * f2.iter().copied().fold(0.0, f64::max);
    for j in 2..n.saturating_sub(2) {
        if f2[j] < cutoff {
            continue;
        }
        let d1 = (-r[j + 2] + 8.0 * r[j + 1] - 8.0 * r[j - 1] + r[j - 2]) / (12.0 * h);
        let d2 = (-r[j + 2] + 16.0 * r[j + 1] - 30.0 * r[j] + 16.0 * r[j - 1] - r[j - 2])
            / (12.0 * h * h);
        out.index.push(j);
        out.rho.push(rho[j]);
        out.tangential.push(d1 / f1[j]);
        out.radial.push(d2 / f2[j]);
    }
    Ok(out)
}

/// `(λ_min, λ_max, sup trace)` of `g⁻¹Ric` over the trusted nodes.
pub fn ricci_eigs_calabi(profile: &CalabiProfile, eig_floor: f64) -> Result<RicciExtremes> {
    let fields = ricci_fields(profile, eig_floor)?;
    if fields.rho.is_empty() {
        return Err(FlowError::InvalidParameter(format!(
            "no grid point has F'' >= {eig_floor} max F''"
        )));
    }
    let mut ext = RicciExtremes {
        lambda_min: f64::INFINITY,
        lambda_max: f64::NEG_INFINITY,
        trace_max: f64::NEG_INFINITY,
        rho_at_min: f64::NAN,
    };
    for ((rho, tan), rad) in fields.rho.iter().zip(&fields.tangential).zip(&fields.radial) {
        let lo = tan.min(*rad);
        if lo < ext.lambda_min {
            ext.lambda_min = lo;
            ext.rho_at_min = *rho;
        }
        ext.lambda_max = ext.lambda_max.max(tan.max(*rad));
        ext.trace_max = ext.trace_max.max(tan + rad);
    }
    Ok(ext)
}

pub fn ricci_eigs_product(model: &ProductModel, state: &ProductState) -> RicciExtremes {
    let e = model.ricci_eigs_of(state);
    RicciExtremes {
        lambda_min: e.min,
        lambda_max: e.max,
        trace_max: e.per_factor.iter().sum(),
        rho_at_min: f64::NAN,
    }
}

/// Eigenvalue extremes of `ω̃ₜ` against `ω₀`: `F′/F₀′` and `F″/F₀″` over the
/// grid, or `cᵢ(t)/cᵢ(0)` over the factors.
pub fn metric_comparison(snapshot: &Snapshot, product: Option<&ProductModel>) -> (f64, f64) {
    let ratios: Vec<f64> = match snapshot {
        Snapshot::Calabi(p) => {
            let (f1, f2) = p.derivatives();
            let g = &p.grid;
            f1.iter()
                .zip(&g.f0_d1)
                .map(|(a, b)| a / b)
                .chain(f2.iter().zip(&g.f0_d2).map(|(a, b)| a / b))
                .collect()
        }
        Snapshot::Product { state, .. } => {
            let model = product.expect("product snapshot needs its model");
            state
                .coeffs
                .iter()
                .zip(model.factors())
                .map(|(c, f)| c / f.c0)
                .collect()
        }
    };
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// `∫ exp(α(sup(-v) + v)) ω₀ⁿ` with `v = ∂u/∂t + u = log(ω̃ₜⁿ/ω₀ⁿ)`; the
/// measure is normalized so that `∫ω₀ⁿ = [ω₀]ⁿ`.
pub fn alpha_integral(
    snapshot: &Snapshot,
    product: Option<&ProductModel>,
    alpha: f64,
) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(FlowError::InvalidParameter(format!(
            "alpha must lie in (0, 1], got {alpha}"
        )));
    }
    match snapshot {
        Snapshot::Calabi(p) => {
            let v = p.log_ma_ratio()?;
            let v_min = v.iter().copied().fold(f64::INFINITY, f64::min);
            let g = &p.grid;
            let vals: Vec<f64> = v
                .iter()
                .zip(g.f0_d1.iter().zip(&g.f0_d2))
                .map(|(v, (a, b))| (alpha * (v - v_min)).exp() * a * b)
                .collect();
            Ok(2.0 * trapezoid(&vals, g.h))
        }
        Snapshot::Product { .. } => {
            let model = product.expect("product snapshot needs its model");
            let initial = model.exact_state(0.0)?;
            // v is constant in space, so the exponent vanishes identically.
            Ok(model.volume(&initial))
        }
    }
}

fn extremes(v: &[f64]) -> (f64, f64) {
    v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
        (lo.min(*x), hi.max(*x))
    })
}

pub fn calabi_record(
    profile: &CalabiProfile,
    _model: &CalabiModel,
    setup: &CohomologySetup,
    cfg: &DiagnosticsConfig,
) -> Result<DiagnosticsRecord> {
    let t = profile.t;
    let class = crate::cohomology::class_at(setup, t)?;
    let eig = ricci_eigs_calabi(profile, cfg.eig_floor)?;
    let v = profile.log_ma_ratio()?;
    let (inf_v, sup_v) = extremes(&v);
    let (inf_u, sup_u) = extremes(&profile.u);
    let snapshot = Snapshot::Calabi(profile.clone());
    let (mr_lo, mr_hi) = metric_comparison(&snapshot, None);
    let alpha_integrals = cfg
        .alphas
        .iter()
        .map(|&a| alpha_integral(&snapshot, None, a).map(|v| (a, v)))
        .collect::<Result<Vec<_>>>()?;
    Ok(DiagnosticsRecord {
        t,
        s: time_rescale(t)?,
        volume_coh: setup.top_power(&class)?,
        class: class.0,
        volume_num: 2.0 * profile.grid_volume(),
        lambda_min: eig.lambda_min,
        lambda_max: eig.lambda_max,
        trace_max: eig.trace_max,
        sup_u,
        inf_u,
        sup_udot_u: sup_v,
        inf_udot_u: inf_v,
        metric_ratio_min: mr_lo,
        metric_ratio_max: mr_hi,
        alpha_integrals,
    })
}

pub fn product_record(
    model: &ProductModel,
    state: &ProductState,
    u: f64,
    setup: &CohomologySetup,
    cfg: &DiagnosticsConfig,
) -> Result<DiagnosticsRecord> {
    let t = state.t;
    let class = crate::cohomology::class_at(setup, t)?;
    let eig = ricci_eigs_product(model, state);
    let v = model.log_volume_ratio(state);
    let snapshot = Snapshot::Product {
        state: state.clone(),
        u,
    };
    let (mr_lo, mr_hi) = metric_comparison(&snapshot, Some(model));
    let alpha_integrals = cfg
        .alphas
        .iter()
        .map(|&a| alpha_integral(&snapshot, Some(model), a).map(|v| (a, v)))
        .collect::<Result<Vec<_>>>()?;
    Ok(DiagnosticsRecord {
        t,
        s: time_rescale(t)?,
        volume_coh: setup.top_power(&class)?,
        class: class.0,
        volume_num: model.volume(state),
        lambda_min: eig.lambda_min,
        lambda_max: eig.lambda_max,
        trace_max: eig.trace_max,
        sup_u: u,
        inf_u: u,
        sup_udot_u: v,
        inf_udot_u: v,
        metric_ratio_min: mr_lo,
        metric_ratio_max: mr_hi,
        alpha_integrals,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    FiniteNoncollapsed,
    FiniteCollapsed,
    InfiniteSingular,
    Convergent,
}

impl Regime {
    pub fn tag(self) -> &'static str {
        match self {
            Regime::FiniteNoncollapsed => "finite-noncollapsed",
            Regime::FiniteCollapsed => "finite-collapsed",
            Regime::InfiniteSingular => "infinite-singular",
            Regime::Convergent => "convergent",
        }
    }
}

/// Cohomology-only description of a flow.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CohomologySummary {
    pub n: usize,
    pub basis: Vec<String>,
    pub c1: CohClass,
    pub omega0: CohClass,
    /// `None` for infinite time.
    pub singular_time: Option<f64>,
    pub singular_time_s: Option<f64>,
    pub active_facets: Vec<String>,
    pub facet_times: Vec<Option<f64>>,
    pub limit_class: CohClass,
    /// Smallest facet value of the limit class.
    pub limit_margin: f64,
    pub collapse: CollapseExponent,
    pub c1_top: f64,
    pub omega0_plus_c1_nef: NefCheck,
    pub regime: Regime,
    /// `(t, [ω_t]ⁿ)` samples.
    pub volume_samples: Vec<(f64, f64)>,
    #[serde(skip)]
    pub singularity: Singularity,
}

impl CohomologySummary {
    pub fn k(&self) -> usize {
        self.collapse.k
    }

    pub fn is_finite(&self) -> bool {
        self.singularity.is_finite()
    }

    /// `T = ∞` and `-c₁` lies on the boundary of the cone.
    pub fn singular_at_infinity(&self) -> bool {
        !self.is_finite() && self.limit_margin <= self.singularity_tol()
    }

    fn singularity_tol(&self) -> f64 {
        crate::cohomology::DEFAULT_TOL
    }
}

/// Singular time, limit class, collapse exponent, nef checks and regime.
pub fn summarize(setup: &CohomologySetup) -> Result<CohomologySummary> {
    let sing = singularity_time(setup)?;
    let collapse = collapse_exponent(setup, &sing)?;
    let c1_top = setup.top_power(&setup.c1)?;
    let limit_margin = setup.cone.min_facet_value(&sing.limit_class);
    let regime = if sing.is_finite() {
        if collapse.k == 0 {
            Regime::FiniteNoncollapsed
        } else {
            Regime::FiniteCollapsed
        }
    } else if limit_margin > setup.tol || setup.c1.is_zero(setup.tol) {
        Regime::Convergent
    } else {
        Regime::InfiniteSingular
    };
    let horizon = if sing.is_finite() { sing.time } else { 10.0 };
    let volume_samples = (0..=10)
        .map(|i| {
            let t = horizon * i as f64 / 10.0;
            volume_poly(setup, t).map(|v| (t, v))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CohomologySummary {
        n: setup.complex_dim(),
        basis: setup.basis.clone(),
        c1: setup.c1.clone(),
        omega0: setup.omega0.clone(),
        singular_time: sing.is_finite().then_some(sing.time),
        singular_time_s: if sing.is_finite() {
            Some(time_rescale(sing.time)?)
        } else {
            None
        },
        active_facets: sing
            .active_facets
            .iter()
            .map(|&i| setup.cone.label(i))
            .collect(),
        facet_times: sing.facet_times.clone(),
        limit_class: sing.limit_class.clone(),
        limit_margin,
        collapse,
        c1_top,
        omega0_plus_c1_nef: nef_check(setup, &(&setup.omega0 + &setup.c1)),
        regime,
        volume_samples,
        singularity: sing,
    })
}

/// Ordinary least squares; returns coefficients and RMS residual.
pub fn least_squares(columns: &[Vec<f64>], y: &[f64]) -> Option<(Vec<f64>, f64)> {
    let m = y.len();
    let p = columns.len();
    if m < p || p == 0 {
        return None;
    }
    let a = DMatrix::from_fn(m, p, |i, j| columns[j][i]);
    let b = DVector::from_column_slice(y);
    let coef = a.clone().svd(true, true).solve(&b, 1e-14).ok()?;
    let resid = &a * &coef - &b;
    let rms = (resid.norm_squared() / m as f64).sqrt();
    Some((coef.iter().copied().collect(), rms))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlowupEntry {
    /// Distance `T - t`.
    pub tau: f64,
    pub t: f64,
    pub lambda_min: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    /// Volume exponent from `log V ≈ K log(T-t) + c₀ + c₁(T-t)` (finite `T`)
    /// or `log V ≈ -K t + c₀ + c₁ e^{-t}` (infinite `T`).
    pub k_fit: Option<f64>,
    /// Plain two-parameter slope on the same window.
    pub k_slope_plain: Option<f64>,
    pub k_fit_rms: Option<f64>,
    /// Exponent of the metric lower bound `ratio_min ≳ (T-t)^β` or `e^{-βt}`.
    pub beta_fit: Option<f64>,
    /// Slope of `inf(∂u/∂t + u)` against `log(T-t)` (finite) or `t` (infinite).
    pub voll_slope: Option<f64>,
    pub lambda_blowup: Vec<BlowupEntry>,
    pub window: (f64, f64),
    pub window_points: usize,
    pub skipped: Option<String>,
}

/// Fits volume, metric and potential exponents near the singular time.
pub fn fit_exponents(traj: &Trajectory) -> FitReport {
    let singular = traj.singular_time;
    let finite = singular.is_finite();
    let last_t = traj.samples.last().map(|s| s.t).unwrap_or(0.0);
    let window = if finite {
        (singular - 0.1, last_t)
    } else {
        (0.5 * last_t, last_t)
    };
    let pts: Vec<&crate::diagnostics::DiagnosticsRecord> = traj
        .records()
        .filter(|r| r.t >= window.0 - 1e-12 && r.t <= window.1 + 1e-12)
        .collect();

    let mut report = FitReport {
        k_fit: None,
        k_slope_plain: None,
        k_fit_rms: None,
        beta_fit: None,
        voll_slope: None,
        lambda_blowup: Vec::new(),
        window,
        window_points: pts.len(),
        skipped: None,
    };

    if finite {
        for j in 1..=6 {
            let tau = 10f64.powi(-j);
            if let Some(s) = traj
                .samples
                .iter()
                .find(|s| ((singular - s.t) - tau).abs() <= 1e-9 * (1.0 + tau) + 1e-6 * tau)
            {
                report.lambda_blowup.push(BlowupEntry {
                    tau,
                    t: s.t,
                    lambda_min: s.record.lambda_min,
                });
            }
        }
    }

    if pts.len() < 5 {
        report.skipped = Some(format!(
            "fit window [{:.4}, {:.4}] holds {} samples, need 5",
            window.0,
            window.1,
            pts.len()
        ));
        return report;
    }
    if !traj.completed() && finite {
        report.skipped = Some("run ended early; window does not reach the stop time".into());
    }

    let ones = vec![1.0; pts.len()];
    let log_v: Vec<f64> = pts.iter().map(|r| r.volume_num.ln()).collect();
    let log_ratio: Vec<f64> = pts.iter().map(|r| r.metric_ratio_min.ln()).collect();
    let inf_v: Vec<f64> = pts.iter().map(|r| r.inf_udot_u).collect();

    if finite {
        let tau: Vec<f64> = pts.iter().map(|r| singular - r.t).collect();
        let x: Vec<f64> = tau.iter().map(|t| t.ln()).collect();
        if let Some((c, rms)) = least_squares(&[x.clone(), ones.clone(), tau.clone()], &log_v) {
            report.k_fit = Some(c[0]);
            report.k_fit_rms = Some(rms);
        }
        report.k_slope_plain = least_squares(&[x.clone(), ones.clone()], &log_v).map(|(c, _)| c[0]);
        report.beta_fit = least_squares(&[x.clone(), ones.clone()], &log_ratio).map(|(c, _)| c[0]);
        report.voll_slope = least_squares(&[x, ones], &inf_v).map(|(c, _)| c[0]);
    } else {
        let t: Vec<f64> = pts.iter().map(|r| r.t).collect();
        let neg_t: Vec<f64> = t.iter().map(|t| -t).collect();
        let decay: Vec<f64> = t.iter().map(|t| (-t).exp()).collect();
        if let Some((c, rms)) =
            least_squares(&[neg_t.clone(), ones.clone(), decay], &log_v)
        {
            report.k_fit = Some(c[0]);
            report.k_fit_rms = Some(rms);
        }
        report.k_slope_plain =
            least_squares(&[neg_t.clone(), ones.clone()], &log_v).map(|(c, _)| c[0]);
        report.beta_fit =
            least_squares(&[neg_t.clone(), ones.clone()], &log_ratio).map(|(c, _)| c[0]);
        report.voll_slope = least_squares(&[t, ones], &inf_v).map(|(c, _)| c[0]);
    }
    report
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdicts {
    pub finite_t: bool,
    pub noncollapsed: bool,
    pub d_threshold: f64,
    pub lambda_min_overall: f64,
    pub ricci_bounded: bool,
    pub singular_at_infinity: bool,
    pub nef_restriction: bool,
    pub c1_top_zero: bool,
    /// `λ_min ≥ -1` for the whole run (the `D = 1` hypothesis).
    pub ricci_bounded_by_one: bool,
    /// Finite-time blow-up test on the `λ_min` table; `None` when the table
    /// lacks `T-10⁻²` or `T-10⁻³`.
    pub blowup_detected: Option<bool>,
    /// `¬(finite_T ∧ noncollapsed ∧ ricci_bounded)`.
    pub finite_time_implication: bool,
    /// `(T = ∞ ∧ singular at ∞ ∧ λ_min ≥ -1) ⇒ c₁ⁿ = 0 ∧ [ω₀] + c₁ nef`.
    pub infinite_time_implication: bool,
    pub consistent: bool,
}

/// Evaluates the observables and the two implications that must hold for
/// any correct run.
pub fn verdicts(
    traj: &Trajectory,
    summary: &CohomologySummary,
    fit: &FitReport,
    cfg: &DiagnosticsConfig,
) -> Verdicts {
    let lambda_min_overall = traj
        .records()
        .map(|r| r.lambda_min)
        .fold(f64::INFINITY, f64::min);
    let lambda0 = traj
        .samples
        .first()
        .map(|s| s.record.lambda_min)
        .unwrap_or(0.0);
    let d_threshold = cfg.d_threshold.unwrap_or(10.0 * lambda0.abs());
    let tol = crate::cohomology::DEFAULT_TOL;

    let finite_t = summary.is_finite();
    let noncollapsed = summary.k() == 0;
    let ricci_bounded = lambda_min_overall >= -d_threshold;
    let singular_at_infinity = summary.singular_at_infinity();
    let nef_restriction = summary.omega0_plus_c1_nef.nef;
    let c1_top_zero = summary.c1_top.abs() <= tol;
    let ricci_bounded_by_one = lambda_min_overall >= -1.0;

    let lookup = |tau: f64| {
        fit.lambda_blowup
            .iter()
            .find(|e| (e.tau - tau).abs() <= 1e-12)
            .map(|e| e.lambda_min)
    };
    let blowup_detected = match (lookup(1e-2), lookup(1e-3)) {
        (Some(l2), Some(l3)) if finite_t => {
            Some(l3 <= cfg.blowup_ratio * l2 && l3 <= cfg.blowup_floor)
        }
        _ => None,
    };

    let finite_time_implication = !(finite_t && noncollapsed && ricci_bounded);
    let infinite_time_implication = !(!finite_t && singular_at_infinity && ricci_bounded_by_one)
        || (c1_top_zero && nef_restriction);
    Verdicts {
        finite_t,
        noncollapsed,
        d_threshold,
        lambda_min_overall,
        ricci_bounded,
        singular_at_infinity,
        nef_restriction,
        c1_top_zero,
        ricci_bounded_by_one,
        blowup_detected,
        finite_time_implication,
        infinite_time_implication,
        consistent: finite_time_implication && infinite_time_implication,
    }
}
