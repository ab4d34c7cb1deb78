//! Calabi-symmetric metrics on the Hirzebruch surface 𝔽₁.
//!
//! On `ℂ² \ {0}` a `U(2)`-invariant potential `F(ρ)`, `ρ = log|z|²`, gives a
//! Kähler form whose eigenvalues against the flat metric are `F′/|z|²`
//! (tangential) and `F″/|z|²` (radial). The metric extends across the
//! exceptional curve `E` (`ρ → -∞`) and the line at infinity (`ρ → +∞`) with
//! class `bH - aE` when `F′` increases from `a` to `b`. Volume forms reduce to
//! `e^{-2ρ} F′F″`, so `Ric` has potential `2ρ - log(F′F″)`.
//!
//! Classes are stored as `(x, y) ↦ xH + yE`; `bH - aE` is `(b, -a)`.

use std::sync::Arc;

use crate::cohomology::{CohClass, CohomologySetup, ConeSpec, IntersectionTensor};
use crate::error::{FlowError, Result};

pub const DEFAULT_HALF_WIDTH: f64 = 15.0;
pub const DEFAULT_POINTS: usize = 2048;

/// Stable logistic `1/(1 + e^{-x})`.
pub fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Stable `log(1 + e^x)`.
pub fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Initial potential `F₀(ρ) = aρ + (b-a) log(1 + e^ρ)` and the Ricci
/// potential of `-Ric(ω₀)`, `P = log(F₀′F₀″) - 2ρ`, with closed-form
/// derivatives written in terms of the logistic function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticPotential {
    pub a: f64,
    pub b: f64,
}

/// Value and first two derivatives at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl LogisticPotential {
    pub fn f0(&self, rho: f64) -> Jet2 {
        let (a, b) = (self.a, self.b);
        let sp = logistic(rho);
        let sm = logistic(-rho);
        Jet2 {
            value: a * rho + (b - a) * softplus(rho),
            d1: a + (b - a) * sp,
            d2: (b - a) * sp * sm,
        }
    }

    /// `F₀‴ = (b-a) σ(1-σ)(1-2σ)`.
    pub fn f0_d3(&self, rho: f64) -> f64 {
        let sp = logistic(rho);
        let sm = logistic(-rho);
        (self.b - self.a) * sp * sm * (sm - sp)
    }

    /// `log(F₀′F₀″)`, evaluated without forming the tiny product.
    pub fn log_vol(&self, rho: f64) -> f64 {
        let f = self.f0(rho);
        f.d1.ln() + (self.b - self.a).ln() - softplus(rho) - softplus(-rho)
    }

    /// Potential of `-Ric(ω₀)`.
    pub fn ricci_potential(&self, rho: f64) -> Jet2 {
        let f = self.f0(rho);
        let sp = logistic(rho);
        let sm = logistic(-rho);
        let q = f.d2 / f.d1;
        Jet2 {
            value: self.log_vol(rho) - 2.0 * rho,
            d1: q + (sm - sp) - 2.0,
            d2: self.f0_d3(rho) / f.d1 - q * q - 2.0 * sp * sm,
        }
    }

    /// Background potential `χ_t = (1 - e^{-t}) P + e^{-t} F₀` of
    /// `ω_t = -Ric(ω₀) + e^{-t}(ω₀ + Ric(ω₀))`.
    pub fn background(&self, t: f64, rho: f64) -> Jet2 {
        let decay = (-t).exp();
        let w = -(-t).exp_m1();
        let p = self.ricci_potential(rho);
        let f = self.f0(rho);
        Jet2 {
            value: w * p.value + decay * f.value,
            d1: w * p.d1 + decay * f.d1,
            d2: w * p.d2 + decay * f.d2,
        }
    }
}

/// Calabi model on 𝔽₁ with class `bH - aE` and a truncated uniform ρ-grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalabiModel {
    pub a: f64,
    pub b: f64,
    pub half_width: f64,
    pub points: usize,
}

impl CalabiModel {
    pub fn new(a: f64, b: f64, half_width: f64, points: usize) -> Result<Self> {
        if !(a > 0.0 && b > a) {
            return Err(FlowError::InvalidParameter(format!(
                "need 0 < a < b, got a = {a}, b = {b}"
            )));
        }
        if !(half_width > 0.0) || points < 3 {
            return Err(FlowError::InvalidParameter(format!(
                "need L > 0 and N >= 3, got L = {half_width}, N = {points}"
            )));
        }
        Ok(Self {
            a,
            b,
            half_width,
            points,
        })
    }

    pub fn with_defaults(a: f64, b: f64) -> Result<Self> {
        Self::new(a, b, DEFAULT_HALF_WIDTH, DEFAULT_POINTS)
    }

    pub fn potential(&self) -> LogisticPotential {
        LogisticPotential {
            a: self.a,
            b: self.b,
        }
    }

    /// Basis `(H, E)`, `H² = 1`, `E² = -1`, `H·E = 0`; facets are the pairings
    /// with the curves `E` and `H - E`; `c₁ = 3H - E`.
    pub fn setup(&self) -> Result<CohomologySetup> {
        let tensor =
            IntersectionTensor::from_entries(2, 2, &[(vec![0, 0], 1.0), (vec![1, 1], -1.0)])?;
        let cone = ConeSpec::new(vec![vec![0.0, -1.0], vec![1.0, 1.0]]).with_labels(&["E", "H-E"]);
        CohomologySetup::new(
            vec!["H".into(), "E".into()],
            tensor,
            cone,
            CohClass::new(vec![3.0, -1.0]),
            CohClass::new(vec![self.b, -self.a]),
        )
    }

    /// Slope pair `(a_t, b_t)` of the class `b_t H - a_t E` at time `t`.
    pub fn slopes_at(&self, t: f64) -> (f64, f64) {
        let decay = (-t).exp();
        (-1.0 + decay * (self.a + 1.0), -3.0 + decay * (self.b + 3.0))
    }

    pub fn grid(&self) -> Arc<CalabiGrid> {
        Arc::new(CalabiGrid::new(self))
    }

    /// `F₀` on the grid.
    pub fn initial_potential(&self) -> Vec<f64> {
        let pot = self.potential();
        self.grid().rho.iter().map(|&r| pot.f0(r).value).collect()
    }

    pub fn initial_profile(&self) -> CalabiProfile {
        let grid = self.grid();
        let u = vec![0.0; grid.len()];
        CalabiProfile::new(grid, 0.0, u)
    }
}

/// Uniform grid on `[-L, L]` with the `t = 0` reference data cached.
#[derive(Debug, Clone, PartialEq)]
pub struct CalabiGrid {
    pub potential: LogisticPotential,
    pub rho: Vec<f64>,
    pub h: f64,
    pub f0_d1: Vec<f64>,
    pub f0_d2: Vec<f64>,
    /// `log(F₀′F₀″)`.
    pub log_vol0: Vec<f64>,
}

impl CalabiGrid {
    pub fn new(model: &CalabiModel) -> Self {
        let n = model.points;
        let l = model.half_width;
        let h = 2.0 * l / (n - 1) as f64;
        let rho: Vec<f64> = (0..n).map(|j| -l + h * j as f64).collect();
        let pot = model.potential();
        let jets: Vec<Jet2> = rho.iter().map(|&r| pot.f0(r)).collect();
        Self {
            potential: pot,
            h,
            f0_d1: jets.iter().map(|j| j.d1).collect(),
            f0_d2: jets.iter().map(|j| j.d2).collect(),
            log_vol0: rho.iter().map(|&r| pot.log_vol(r)).collect(),
            rho,
        }
    }

    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    pub fn background(&self, t: f64) -> Background {
        let jets: Vec<Jet2> = self
            .rho
            .iter()
            .map(|&r| self.potential.background(t, r))
            .collect();
        Background {
            t,
            chi: jets.iter().map(|j| j.value).collect(),
            d1: jets.iter().map(|j| j.d1).collect(),
            d2: jets.iter().map(|j| j.d2).collect(),
        }
    }
}

/// `χ_t` and its first two derivatives on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Background {
    pub t: f64,
    pub chi: Vec<f64>,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
}

/// Centered first and second differences of `u` with the homogeneous Neumann
/// ghost `u_{-1} = u_1` at both ends.
pub fn neumann_derivatives(u: &[f64], h: f64) -> (Vec<f64>, Vec<f64>) {
    let n = u.len();
    let mut d1 = vec![0.0; n];
    let mut d2 = vec![0.0; n];
    for j in 1..n - 1 {
        d1[j] = (u[j + 1] - u[j - 1]) / (2.0 * h);
        d2[j] = (u[j + 1] - 2.0 * u[j] + u[j - 1]) / (h * h);
    }
    d2[0] = 2.0 * (u[1] - u[0]) / (h * h);
    d2[n - 1] = 2.0 * (u[n - 2] - u[n - 1]) / (h * h);
    (d1, d2)
}

/// Snapshot of the reduced flow: the potential `u(ρ, t)` over the cached
/// background `χ_t`, with total potential `F = χ_t + u`.
#[derive(Debug, Clone, PartialEq)]
pub struct CalabiProfile {
    pub t: f64,
    pub grid: Arc<CalabiGrid>,
    pub background: Background,
    pub u: Vec<f64>,
}

impl CalabiProfile {
    pub fn new(grid: Arc<CalabiGrid>, t: f64, u: Vec<f64>) -> Self {
        let background = grid.background(t);
        Self::with_background(grid, background, u)
    }

    pub fn with_background(grid: Arc<CalabiGrid>, background: Background, u: Vec<f64>) -> Self {
        Self {
            t: background.t,
            grid,
            background,
            u,
        }
    }

    pub fn rho(&self) -> &[f64] {
        &self.grid.rho
    }

    /// `(F′, F″)` on the grid.
    pub fn derivatives(&self) -> (Vec<f64>, Vec<f64>) {
        let (u1, u2) = neumann_derivatives(&self.u, self.grid.h);
        let f1 = self.background.d1.iter().zip(u1).map(|(c, d)| c + d).collect();
        let f2 = self.background.d2.iter().zip(u2).map(|(c, d)| c + d).collect();
        (f1, f2)
    }

    /// Smallest `F″` and where it occurs.
    pub fn min_f2(&self) -> (f64, f64) {
        let (_, f2) = self.derivatives();
        f2.iter()
            .zip(self.rho())
            .fold((f64::INFINITY, 0.0), |acc, (&v, &r)| if v < acc.0 { (v, r) } else { acc })
    }

    /// Errors on the first grid point where `F′ ≤ 0` or `F″ ≤ 0`.
    pub fn check_kaehler(&self, f1: &[f64], f2: &[f64], floor: f64) -> Result<()> {
        for (j, (&d1, &d2)) in f1.iter().zip(f2).enumerate() {
            if !(d1 > 0.0) {
                return Err(self.violation(j, "F'", d1));
            }
            if !(d2 >= floor) || d2 <= 0.0 {
                return Err(self.violation(j, "F''", d2));
            }
        }
        Ok(())
    }

    fn violation(&self, j: usize, quantity: &'static str, value: f64) -> FlowError {
        FlowError::KaehlerViolation {
            t: self.t,
            rho: self.grid.rho[j],
            quantity,
            value,
        }
    }

    /// `v = log(F′F″ / F₀′F₀″)`, which equals `∂u/∂t + u` along the flow.
    pub fn log_ma_ratio(&self) -> Result<Vec<f64>> {
        let (f1, f2) = self.derivatives();
        self.check_kaehler(&f1, &f2, 0.0)?;
        Ok(f1
            .iter()
            .zip(&f2)
            .zip(&self.grid.log_vol0)
            .map(|((a, b), l0)| a.ln() + b.ln() - l0)
            .collect())
    }

    /// `∫ F′F″ dρ` by the trapezoid rule.
    pub fn grid_volume(&self) -> f64 {
        let (f1, f2) = self.derivatives();
        let vals: Vec<f64> = f1.iter().zip(&f2).map(|(a, b)| a * b).collect();
        trapezoid(&vals, self.grid.h)
    }
}

/// Volume-form ratio `ω̃ₜ²/ω₀² = F′F″/(F₀′F₀″)` on the grid.
pub fn calabi_ma_ratio(profile: &CalabiProfile) -> Result<Vec<f64>> {
    Ok(profile.log_ma_ratio()?.into_iter().map(f64::exp).collect())
}

/// Complex Hessian determinant of `F(log|z|²)` at `|z|² = e^ρ`.
pub fn hessian_det_reduced(rho: f64, f_d1: f64, f_d2: f64) -> f64 {
    (-2.0 * rho).exp() * f_d1 * f_d2
}

pub(crate) fn trapezoid(vals: &[f64], h: f64) -> f64 {
    let n = vals.len();
    if n < 2 {
        return 0.0;
    }
    let inner: f64 = vals[1..n - 1].iter().sum();
    h * (inner + 0.5 * (vals[0] + vals[n - 1]))
}
