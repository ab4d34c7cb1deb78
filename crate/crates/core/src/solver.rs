//! Time stepping for the reduced scalar flow
//! `∂u/∂t = log[(χ′+u′)(χ″+u″)/(F₀′F₀″)] - u`, and trajectory assembly for
//! both model backends.

use serde::{Deserialize, Serialize};

use crate::cohomology::{singularity_time, CohomologySetup};
use crate::diagnostics::{self, DiagnosticsConfig, DiagnosticsRecord};
use crate::error::{FlowError, Result};
use crate::models::{Background, CalabiModel, CalabiProfile, Model, ProductModel, ProductState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    #[default]
    Implicit,
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub dt: f64,
    /// Distance before the cohomological `T` at which the run stops.
    pub delta_stop: f64,
    pub newton_tol: f64,
    pub newton_max_iters: u32,
    pub kaehler_floor: f64,
    pub scheme: Scheme,
    /// Step-size cap as a fraction of the remaining time `T - t`.
    pub step_fraction: f64,
    pub max_halvings: u32,
    /// End of infinite-time runs.
    pub t_end: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            delta_stop: 1e-3,
            newton_tol: 1e-10,
            newton_max_iters: 30,
            kaehler_floor: 1e-12,
            scheme: Scheme::Implicit,
            step_fraction: 0.02,
            max_halvings: 10,
            t_end: 10.0,
        }
    }
}

impl SolverConfig {
    /// Checks the invariants; errors name the offending field.
    pub fn validate(&self) -> Result<()> {
        let checks = [
            (self.dt > 0.0, "dt", "must be positive"),
            (self.delta_stop > 0.0, "delta_stop", "must be positive"),
            (self.newton_tol > 0.0, "newton_tol", "must be positive"),
            (self.newton_max_iters > 0, "newton_max_iters", "must be positive"),
            (self.kaehler_floor > 0.0, "kaehler_floor", "must be positive"),
            (
                self.step_fraction > 0.0 && self.step_fraction <= 1.0,
                "step_fraction",
                "must lie in (0, 1]",
            ),
            (self.t_end > 0.0, "t_end", "must be positive"),
        ];
        match checks.iter().find(|(ok, _, _)| !ok) {
            Some((_, field, msg)) => Err(FlowError::InvalidParameter(format!("{field}: {msg}"))),
            None => Ok(()),
        }
    }
}

/// Sample schedule: a uniform grid up to `T - near_window`, then
/// `per_decade` logarithmically spaced distances `T - t` down to
/// `delta_stop`. Infinite-time runs use a uniform grid up to `t_end`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Schedule {
    pub step: f64,
    pub infinite_step: f64,
    pub near_window: f64,
    pub per_decade: u32,
    /// Additional sample times, merged into the grid.
    pub extra_times: Vec<f64>,
}

impl Default for Schedule {
    fn default() -> Self {
        Self {
            step: 0.01,
            infinite_step: 0.05,
            near_window: 0.1,
            per_decade: 10,
            extra_times: Vec::new(),
        }
    }
}

impl Schedule {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            (self.step > 0.0, "step", "must be positive"),
            (self.infinite_step > 0.0, "infinite_step", "must be positive"),
            (self.near_window > 0.0, "near_window", "must be positive"),
            (self.per_decade > 0, "per_decade", "must be positive"),
            (
                self.extra_times.iter().all(|t| t.is_finite() && *t >= 0.0),
                "extra_times",
                "must be finite and non-negative",
            ),
        ];
        match checks.iter().find(|(ok, _, _)| !ok) {
            Some((_, field, msg)) => Err(FlowError::InvalidParameter(format!("{field}: {msg}"))),
            None => Ok(()),
        }
    }

    /// Sample times in `[0, stop_time]`, strictly increasing. For finite `T`
    /// every `T - 10^{-j}` above the stop time is hit exactly, and the stop
    /// time itself is always the last sample.
    pub fn times(&self, singular_time: f64, cfg: &SolverConfig) -> Result<Vec<f64>> {
        let stop = stop_time(singular_time, cfg);
        if !(stop > 0.0) {
            return Err(FlowError::InvalidParameter(format!(
                "delta_stop = {} leaves no room before T = {singular_time}",
                cfg.delta_stop
            )));
        }
        let mut times = Vec::new();
        if singular_time.is_finite() {
            let near = (singular_time - self.near_window).max(0.0);
            push_uniform(&mut times, self.step, near);
            let per = self.per_decade as i32;
            // Distances 10^{-k/per}, starting at the first one inside the window.
            let mut k = (-(per as f64) * self.near_window.log10() - 1e-9).ceil() as i32;
            loop {
                let tau = if k % per == 0 {
                    10f64.powi(-(k / per))
                } else {
                    10f64.powf(-(k as f64) / per as f64)
                };
                if tau < cfg.delta_stop * (1.0 + 1e-9) {
                    break;
                }
                if singular_time - tau >= 0.0 {
                    times.push(singular_time - tau);
                }
                k += 1;
            }
        } else {
            push_uniform(&mut times, self.infinite_step, stop);
        }
        times.push(stop);
        times.extend(self.extra_times.iter().copied().filter(|&t| t <= stop));
        times.sort_by(|a, b| a.partial_cmp(b).expect("finite times"));
        times.dedup_by(|b, a| (*b - *a).abs() <= 1e-12 * (1.0 + a.abs()));
        Ok(times)
    }
}

/// `0, h, 2h, …` strictly below `end`.
fn push_uniform(times: &mut Vec<f64>, h: f64, end: f64) {
    let mut i = 0u64;
    loop {
        let t = h * i as f64;
        if t >= end * (1.0 - 1e-12) && i > 0 {
            break;
        }
        times.push(t);
        i += 1;
    }
}

/// Solves `A x = d` for tridiagonal `A` (Thomas algorithm). `lower[0]` and
/// `upper[n-1]` are ignored.
pub fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = upper[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - lower[i] * c[i - 1];
        c[i] = if i + 1 < n { upper[i] / m } else { 0.0 };
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

/// Backward-Euler residual `u⁺ - u - dt (log-ratio(u⁺) - u⁺)`, or the first
/// Kähler violation of the trial state.
fn residual(
    trial: &CalabiProfile,
    previous: &[f64],
    dt: f64,
    floor: f64,
) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let (f1, f2) = trial.derivatives();
    trial.check_kaehler(&f1, &f2, floor)?;
    let g = trial
        .u
        .iter()
        .zip(previous)
        .enumerate()
        .map(|(j, (un, uo))| {
            let log_ratio = f1[j].ln() + f2[j].ln() - trial.grid.log_vol0[j];
            un - uo - dt * (log_ratio - un)
        })
        .collect();
    Ok((g, f1, f2))
}

/// Diagonal of the Newton Jacobian, `1 + dt + 2dt/(h²F″)`.
fn jacobian_diag(dt: f64, h: f64, f2: &[f64]) -> Vec<f64> {
    f2.iter().map(|d| 1.0 + dt + 2.0 * dt / (h * h * d)).collect()
}

/// Sup norm of the diagonally scaled residual `G_j / J_jj`. Near the ends
/// `J_jj ~ dt/(h²F″)` is huge and the raw residual sits at the rounding
/// floor of `log F″`; the scaled residual measures the defect in units of `u`.
fn scaled_norm(g: &[f64], diag: &[f64]) -> f64 {
    g.iter().zip(diag).fold(0.0, |m, (g, d)| m.max((g / d).abs()))
}

/// One backward-Euler step onto the given background `χ_{t_next}`, solved by
/// damped Newton iteration. No step splitting.
pub fn backward_euler_step(
    profile: &CalabiProfile,
    background: Background,
    cfg: &SolverConfig,
) -> Result<CalabiProfile> {
    let t_next = background.t;
    let dt = t_next - profile.t;
    let grid = profile.grid.clone();
    let h = grid.h;
    let n = grid.len();
    let mut current = CalabiProfile::with_background(grid, background, profile.u.clone());

    let (mut g, mut f1, mut f2) = residual(&current, &profile.u, dt, cfg.kaehler_floor)?;
    let mut norm = scaled_norm(&g, &jacobian_diag(dt, h, &f2));
    let mut last_violation = None;
    for _ in 0..cfg.newton_max_iters {
        if norm <= cfg.newton_tol {
            return Ok(current);
        }
        let mut lower = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut upper = vec![0.0; n];
        for j in 0..n {
            let k2 = dt / (h * h * f2[j]);
            diag[j] = 1.0 + dt + 2.0 * k2;
            if j == 0 {
                upper[j] = -2.0 * k2;
            } else if j == n - 1 {
                lower[j] = -2.0 * k2;
            } else {
                let k1 = dt / (2.0 * h * f1[j]);
                lower[j] = k1 - k2;
                upper[j] = -k1 - k2;
            }
        }
        let rhs: Vec<f64> = g.iter().map(|x| -x).collect();
        let delta = solve_tridiagonal(&lower, &diag, &upper, &rhs);

        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let u_trial: Vec<f64> = current
                .u
                .iter()
                .zip(&delta)
                .map(|(u, d)| u + lambda * d)
                .collect();
            let trial = CalabiProfile::with_background(
                current.grid.clone(),
                current.background.clone(),
                u_trial,
            );
            match residual(&trial, &profile.u, dt, cfg.kaehler_floor) {
                Ok((gt, f1t, f2t)) => {
                    let nt = scaled_norm(&gt, &jacobian_diag(dt, h, &f2t));
                    if nt < (1.0 - 1e-4 * lambda) * norm || nt <= cfg.newton_tol {
                        accepted = Some((trial, gt, f1t, f2t, nt));
                        break;
                    }
                }
                Err(e) => last_violation = Some(e),
            }
            lambda *= 0.5;
        }
        match accepted {
            Some((trial, gt, f1t, f2t, nt)) => {
                current = trial;
                g = gt;
                f1 = f1t;
                f2 = f2t;
                norm = nt;
            }
            None => break,
        }
    }
    if norm <= cfg.newton_tol {
        return Ok(current);
    }
    Err(last_violation.unwrap_or(FlowError::NewtonFailure {
        t: t_next,
        halvings: 0,
        residual: norm,
    }))
}

fn explicit_step(profile: &CalabiProfile, t_next: f64, cfg: &SolverConfig) -> Result<CalabiProfile> {
    let dt = t_next - profile.t;
    let v = profile.log_ma_ratio()?;
    let u: Vec<f64> = profile
        .u
        .iter()
        .zip(&v)
        .map(|(u, v)| u + dt * (v - u))
        .collect();
    let next = CalabiProfile::new(profile.grid.clone(), t_next, u);
    let (f1, f2) = next.derivatives();
    next.check_kaehler(&f1, &f2, cfg.kaehler_floor)?;
    Ok(next)
}

/// Advances `profile` to `t_next` with one backward-Euler step solved by
/// Newton's method (tridiagonal Jacobian, Neumann ends). On Newton failure
/// the interval is split in halves, up to `max_halvings` levels deep.
pub fn step(profile: &CalabiProfile, t_next: f64, cfg: &SolverConfig) -> Result<CalabiProfile> {
    if !(t_next > profile.t) {
        return Err(FlowError::InvalidParameter(format!(
            "step target {t_next} is not after {}",
            profile.t
        )));
    }
    step_traced(profile, t_next, cfg).map(|s| s.profile)
}

/// Result of [`step`] together with the last sub-step actually taken, so
/// that `u̇` can be formed by a backward difference even after halving.
struct Stepped {
    profile: CalabiProfile,
    prev_u: Vec<f64>,
    last_dt: f64,
}

fn step_traced(profile: &CalabiProfile, t_next: f64, cfg: &SolverConfig) -> Result<Stepped> {
    match cfg.scheme {
        Scheme::Explicit => {
            let next = explicit_step(profile, t_next, cfg)?;
            Ok(Stepped {
                last_dt: next.t - profile.t,
                prev_u: profile.u.clone(),
                profile: next,
            })
        }
        Scheme::Implicit => step_with_halving(profile, t_next, cfg, 0),
    }
}

fn step_with_halving(
    profile: &CalabiProfile,
    t_next: f64,
    cfg: &SolverConfig,
    depth: u32,
) -> Result<Stepped> {
    match backward_euler_step(profile, profile.grid.background(t_next), cfg) {
        Ok(p) => Ok(Stepped {
            last_dt: p.t - profile.t,
            prev_u: profile.u.clone(),
            profile: p,
        }),
        Err(err) => {
            if depth >= cfg.max_halvings {
                return Err(match err {
                    FlowError::NewtonFailure { t, residual, .. } => FlowError::NewtonFailure {
                        t,
                        halvings: depth,
                        residual,
                    },
                    other => other,
                });
            }
            let mid = 0.5 * (profile.t + t_next);
            let half = step_with_halving(profile, mid, cfg, depth + 1)?;
            step_with_halving(&half.profile, t_next, cfg, depth + 1)
        }
    }
}

/// Model state at a sample time.
#[derive(Debug, Clone, PartialEq)]
pub enum Snapshot {
    Calabi(CalabiProfile),
    /// Exact product state with the spatially constant potential `u(t)`.
    Product { state: ProductState, u: f64 },
}

impl Snapshot {
    pub fn potential(&self) -> Vec<f64> {
        match self {
            Snapshot::Calabi(p) => p.u.clone(),
            Snapshot::Product { u, .. } => vec![*u],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub snapshot: Snapshot,
    pub record: DiagnosticsRecord,
    /// `sup |log-ratio - (u̇ + u)|` with `u̇` from the last sub-step's
    /// backward difference (0 at `t = 0`).
    pub flow_defect: f64,
    /// Size of the sub-step that produced this sample.
    pub last_dt: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    /// Singular time of the class ODE.
    pub singular_time: f64,
    /// Where the run was scheduled to stop.
    pub stop_time: f64,
    pub steps: usize,
    /// Error that ended the run early, if any.
    pub failure: Option<FlowError>,
}

impl Trajectory {
    pub fn completed(&self) -> bool {
        self.failure.is_none()
    }

    pub fn records(&self) -> impl Iterator<Item = &DiagnosticsRecord> {
        self.samples.iter().map(|s| &s.record)
    }

    /// Sample closest to `t`.
    pub fn sample_near(&self, t: f64) -> Option<&Sample> {
        self.samples.iter().min_by(|a, b| {
            (a.t - t)
                .abs()
                .partial_cmp(&(b.t - t).abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    }
}

/// Stop time of a run: `T - delta_stop` for finite `T`, `t_end` otherwise.
pub fn stop_time(singular_time: f64, cfg: &SolverConfig) -> f64 {
    if singular_time.is_finite() {
        singular_time - cfg.delta_stop
    } else {
        cfg.t_end
    }
}

fn validate_schedule(times: &[f64], stop: f64) -> Result<()> {
    for w in times.windows(2) {
        if !(w[1] > w[0]) {
            return Err(FlowError::InvalidParameter(
                "sample times must be strictly increasing".into(),
            ));
        }
    }
    if let Some(&t) = times.iter().find(|&&t| t < 0.0 || t > stop * (1.0 + 1e-12)) {
        return Err(FlowError::InvalidParameter(format!(
            "sample time {t} outside [0, {stop}]"
        )));
    }
    Ok(())
}

/// Runs the flow from `t = 0` through the sample schedule.
pub fn run(
    model: &Model,
    cfg: &SolverConfig,
    diag: &DiagnosticsConfig,
    sample_times: &[f64],
) -> Result<Trajectory> {
    cfg.validate()?;
    diag.validate()?;
    let setup = model.setup()?;
    let singular = singularity_time(&setup)?.time;
    let stop = stop_time(singular, cfg);
    validate_schedule(sample_times, stop)?;
    match model {
        Model::Product(m) => run_product(m, &setup, diag, sample_times, singular, stop),
        Model::Calabi(m) => run_calabi(m, &setup, cfg, diag, sample_times, singular, stop),
    }
}

fn run_calabi(
    model: &CalabiModel,
    setup: &CohomologySetup,
    cfg: &SolverConfig,
    diag: &DiagnosticsConfig,
    sample_times: &[f64],
    singular: f64,
    stop: f64,
) -> Result<Trajectory> {
    let mut profile = model.initial_profile();
    let mut samples = Vec::with_capacity(sample_times.len());
    let mut steps = 0usize;
    let mut failure = None;
    let mut prev_u = profile.u.clone();
    let mut last_dt = 0.0;

    'outer: for &target in sample_times {
        while profile.t < target {
            let remaining = target - profile.t;
            let cap = if singular.is_finite() {
                cfg.dt.min(cfg.step_fraction * (singular - profile.t))
            } else {
                cfg.dt
            };
            let pieces = (remaining / cap - 1e-9).ceil().max(1.0);
            let t_next = if pieces <= 1.0 {
                target
            } else {
                profile.t + remaining / pieces
            };
            match step_traced(&profile, t_next, cfg) {
                Ok(next) => {
                    last_dt = next.last_dt;
                    prev_u = next.prev_u;
                    profile = next.profile;
                    steps += 1;
                }
                Err(e) => {
                    failure = Some(e);
                    break 'outer;
                }
            }
        }
        let record = match diagnostics::calabi_record(&profile, model, setup, diag) {
            Ok(r) => r,
            Err(e) => {
                failure = Some(e);
                break;
            }
        };
        let flow_defect = if last_dt > 0.0 {
            let v = profile.log_ma_ratio()?;
            v.iter()
                .zip(&profile.u)
                .zip(&prev_u)
                .map(|((v, u), uo)| (v - ((u - uo) / last_dt + u)).abs())
                .fold(0.0, f64::max)
        } else {
            0.0
        };
        samples.push(Sample {
            t: profile.t,
            snapshot: Snapshot::Calabi(profile.clone()),
            record,
            flow_defect,
            last_dt,
        });
    }
    Ok(Trajectory {
        samples,
        singular_time: singular,
        stop_time: stop,
        steps,
        failure,
    })
}

// Five-point Gauss–Legendre rule on [-1, 1].
const GL_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189,
    0.478_628_670_499_366,
    0.568_888_888_888_889,
    0.478_628_670_499_366,
    0.236_926_885_056_189,
];

/// Advances the product potential `u̇ = L(t) - u` exactly in `u` and by
/// composite Gauss–Legendre quadrature in the forcing `L = Σ log(cᵢ/cᵢ(0))`:
/// `u(t₁) = e^{-(t₁-t₀)} u(t₀) + ∫ e^{s-t₁} L(s) ds`.
fn advance_product_potential(model: &ProductModel, u0: f64, t0: f64, t1: f64, singular: f64) -> f64 {
    if t1 <= t0 {
        return u0;
    }
    let width = if singular.is_finite() {
        0.01f64.min(0.05 * (singular - t1))
    } else {
        0.01
    };
    let panels = ((t1 - t0) / width).ceil().max(1.0) as usize;
    let hp = (t1 - t0) / panels as f64;
    let forcing = |s: f64| -> f64 {
        model
            .factors()
            .iter()
            .map(|f| (f.coeff(s) / f.c0).ln())
            .sum()
    };
    let mut integral = 0.0;
    for p in 0..panels {
        let mid = t0 + hp * (p as f64 + 0.5);
        for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
            let s = mid + 0.5 * hp * x;
            integral += 0.5 * hp * w * (s - t1).exp() * forcing(s);
        }
    }
    (-(t1 - t0)).exp() * u0 + integral
}

fn run_product(
    model: &ProductModel,
    setup: &CohomologySetup,
    diag: &DiagnosticsConfig,
    sample_times: &[f64],
    singular: f64,
    stop: f64,
) -> Result<Trajectory> {
    let mut samples = Vec::with_capacity(sample_times.len());
    let mut u = 0.0;
    let mut t_prev = 0.0;
    for &t in sample_times {
        u = advance_product_potential(model, u, t_prev, t, singular);
        t_prev = t;
        let state = model.exact_state(t)?;
        let record = diagnostics::product_record(model, &state, u, setup, diag)?;
        samples.push(Sample {
            t,
            snapshot: Snapshot::Product { state, u },
            record,
            flow_defect: 0.0,
            last_dt: 0.0,
        });
    }
    Ok(Trajectory {
        samples,
        singular_time: singular,
        stop_time: stop,
        steps: 0,
        failure: None,
    })
}

/// Sup-norm differences of `u` between consecutive refinement levels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefinementReport {
    pub times: Vec<f64>,
    /// `diffs[level][i]`: `‖u_{level+1} - u_level‖∞` at `times[i]`, measured
    /// on the coarser level's nodes.
    pub diffs: Vec<Vec<f64>>,
    /// `log₂(diffs[l][i] / diffs[l+1][i])`, one row per pair of consecutive
    /// differences.
    pub orders: Vec<Vec<f64>>,
}

/// Compares trajectories at successive resolutions `(N, dt)`, `(2N-1, dt/2)`,
/// ... Fine grids must nest the coarse grid (every other node), and all
/// trajectories must share their sample times.
pub fn time_step_audit(levels: &[&Trajectory]) -> Result<RefinementReport> {
    if levels.len() < 2 {
        return Err(FlowError::Mismatch("need at least two trajectories".into()));
    }
    let times: Vec<f64> = levels[0].samples.iter().map(|s| s.t).collect();
    for traj in &levels[1..] {
        let other: Vec<f64> = traj.samples.iter().map(|s| s.t).collect();
        if other.len() != times.len()
            || other
                .iter()
                .zip(&times)
                .any(|(a, b)| (a - b).abs() > 1e-12 * (1.0 + b.abs()))
        {
            return Err(FlowError::Mismatch("sample times differ".into()));
        }
    }
    let mut diffs = Vec::new();
    for pair in levels.windows(2) {
        let mut row = Vec::with_capacity(times.len());
        for (sc, sf) in pair[0].samples.iter().zip(&pair[1].samples) {
            let uc = sc.snapshot.potential();
            let uf = sf.snapshot.potential();
            let stride = match (&sc.snapshot, &sf.snapshot) {
                (Snapshot::Product { .. }, Snapshot::Product { .. }) => 1,
                (Snapshot::Calabi(_), Snapshot::Calabi(_)) => {
                    if uf.len() != 2 * uc.len() - 1 {
                        return Err(FlowError::Mismatch(format!(
                            "grid of {} points does not nest in {} points",
                            uc.len(),
                            uf.len()
                        )));
                    }
                    2
                }
                _ => return Err(FlowError::Mismatch("mixed model backends".into())),
            };
            let d = uc
                .iter()
                .enumerate()
                .map(|(j, v)| (v - uf[stride * j]).abs())
                .fold(0.0, f64::max);
            row.push(d);
        }
        diffs.push(row);
    }
    let orders = diffs
        .windows(2)
        .map(|w| {
            w[0].iter()
                .zip(&w[1])
                .map(|(a, b)| (a / b).log2())
                .collect()
        })
        .collect();
    Ok(RefinementReport {
        times,
        diffs,
        orders,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::CalabiGrid;
    use std::sync::Arc;

    #[test]
    fn thomas_matches_dense_solve() {
        let lower = [0.0, -1.0, -0.5, -2.0];
        let diag = [4.0, 5.0, 6.0, 7.0];
        let upper = [1.0, -1.0, 2.0, 0.0];
        let x_true = [1.0, -2.0, 0.5, 3.0];
        let rhs: Vec<f64> = (0..4)
            .map(|i| {
                let mut s = diag[i] * x_true[i];
                if i > 0 {
                    s += lower[i] * x_true[i - 1];
                }
                if i < 3 {
                    s += upper[i] * x_true[i + 1];
                }
                s
            })
            .collect();
        let x = solve_tridiagonal(&lower, &diag, &upper, &rhs);
        for (a, b) in x.iter().zip(x_true) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn first_step_keeps_zero_potential_small() {
        let model = CalabiModel::new(1.0, 4.0, 10.0, 401).unwrap();
        let p0 = model.initial_profile();
        let cfg = SolverConfig::default();
        let dt = 1e-4;
        let p1 = step(&p0, dt, &cfg).unwrap();
        // u(dt) = O(dt^2) because the log-ratio vanishes at t = 0.
        assert!(p1.u.iter().all(|u| u.abs() < 10.0 * dt * dt));
    }

    #[test]
    fn constant_coefficient_reduction_matches_linear_ode() {
        // Synthetic background with constant χ′, χ″ and reference volume:
        // the log-ratio is spatially constant and backward Euler reduces to
        // u⁺ = (u + dt c)/(1 + dt).
        let model = CalabiModel::new(1.0, 4.0, 5.0, 51).unwrap();
        let mut grid = CalabiGrid::new(&model);
        let n = grid.len();
        grid.log_vol0 = vec![0.0; n];
        let grid = Arc::new(grid);
        let (p, q) = (2.0_f64, 3.0_f64);
        let c = (p * q).ln();
        let bg = |t: f64| Background {
            t,
            chi: vec![0.0; n],
            d1: vec![p; n],
            d2: vec![q; n],
        };
        let u0 = 0.4;
        let profile = CalabiProfile::with_background(grid.clone(), bg(0.0), vec![u0; n]);
        let cfg = SolverConfig::default();
        let dt = 0.05;
        let next = backward_euler_step(&profile, bg(dt), &cfg).unwrap();
        let expected = (u0 + dt * c) / (1.0 + dt);
        assert!(next.u.iter().all(|v| (v - expected).abs() < cfg.newton_tol));
    }

    #[test]
    fn step_rejects_backwards_target() {
        let model = CalabiModel::new(1.0, 4.0, 5.0, 51).unwrap();
        let p0 = model.initial_profile();
        assert!(step(&p0, 0.0, &SolverConfig::default()).is_err());
    }

    #[test]
    fn config_validation() {
        let bad = SolverConfig {
            dt: 0.0,
            ..SolverConfig::default()
        };
        assert!(bad.validate().is_err());
        assert!(SolverConfig::default().validate().is_ok());
    }
}
