//! Products of Kähler–Einstein curves.
//!
//! Each factor carries a fixed unit-volume form `η` with `Ric(η) = κη`, so the
//! flow metric stays `Σ cᵢ(t) ηᵢ` and the normalized flow collapses to the
//! linear ODE `ċᵢ = -κᵢ - cᵢ`. The cohomology coordinates and the metric
//! coefficients are then literally the same numbers.

use serde::{Deserialize, Serialize};

use crate::cohomology::{CohClass, CohomologySetup, ConeSpec, IntersectionTensor};
use crate::error::{FlowError, Result};

/// Catalog of curve factors with their Einstein constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveKind {
    /// ℙ¹, κ = 2.
    #[serde(rename = "P1")]
    ProjectiveLine,
    /// Flat elliptic curve, κ = 0.
    #[serde(rename = "T2")]
    Torus,
    /// Genus-two hyperbolic curve, κ = -2.
    #[serde(rename = "Sigma2")]
    Genus2,
}

impl CurveKind {
    pub fn kappa(self) -> f64 {
        match self {
            CurveKind::ProjectiveLine => 2.0,
            CurveKind::Torus => 0.0,
            CurveKind::Genus2 => -2.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            CurveKind::ProjectiveLine => "P1",
            CurveKind::Torus => "T2",
            CurveKind::Genus2 => "Sigma2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Factor {
    pub kappa: f64,
    pub c0: f64,
}

impl Factor {
    pub fn new(kind: CurveKind, c0: f64) -> Self {
        Self {
            kappa: kind.kappa(),
            c0,
        }
    }

    /// `c(t) = (c₀ + κ) e^{-t} - κ`.
    pub fn coeff(&self, t: f64) -> f64 {
        (self.c0 + self.kappa) * (-t).exp() - self.kappa
    }

    /// First zero of `c(t)`, if any.
    pub fn vanish_time(&self) -> Option<f64> {
        (self.kappa > 0.0).then(|| ((self.c0 + self.kappa) / self.kappa).ln())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProductModel {
    factors: Vec<Factor>,
    labels: Vec<String>,
}

/// Exact flow state: metric coefficients against the unit factor forms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductState {
    pub t: f64,
    pub coeffs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RicciEigs {
    pub per_factor: Vec<f64>,
    pub min: f64,
    pub max: f64,
}

impl ProductModel {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.len() < 2 {
            return Err(FlowError::InvalidParameter(
                "a product model needs at least two factors".into(),
            ));
        }
        if let Some(f) = factors.iter().find(|f| !(f.c0 > 0.0)) {
            return Err(FlowError::InvalidParameter(format!(
                "initial coefficient must be positive, got {}",
                f.c0
            )));
        }
        let labels = (1..=factors.len()).map(|i| format!("eta{i}")).collect();
        Ok(Self { factors, labels })
    }

    pub fn from_kinds(kinds: &[CurveKind], c0: &[f64]) -> Result<Self> {
        if kinds.len() != c0.len() {
            return Err(FlowError::InvalidParameter(format!(
                "{} factor kinds but {} initial coefficients",
                kinds.len(),
                c0.len()
            )));
        }
        Self::new(
            kinds
                .iter()
                .zip(c0)
                .map(|(k, c)| Factor::new(*k, *c))
                .collect(),
        )
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Basis `ηᵢ`, intersection `η₁···ηₘ = 1`, cone = positive orthant,
    /// `c₁ = (κᵢ)`, `[ω₀] = (c0ᵢ)`.
    pub fn setup(&self) -> Result<CohomologySetup> {
        let m = self.factors.len();
        let tensor = IntersectionTensor::from_entries(m, m, &[((0..m).collect(), 1.0)])?;
        let facets = (0..m)
            .map(|i| (0..m).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        let labels: Vec<String> = (1..=m).map(|i| format!("c{i}>0")).collect();
        let mut cone = ConeSpec::new(facets);
        cone.facet_labels = labels;
        CohomologySetup::new(
            self.labels.clone(),
            tensor,
            cone,
            CohClass::new(self.factors.iter().map(|f| f.kappa).collect()),
            CohClass::new(self.factors.iter().map(|f| f.c0).collect()),
        )
    }

    /// Earliest vanishing time over the factors (`∞` if none vanishes).
    pub fn vanish_time(&self) -> f64 {
        self.factors
            .iter()
            .filter_map(Factor::vanish_time)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn exact_state(&self, t: f64) -> Result<ProductState> {
        if t.is_nan() || t < 0.0 {
            return Err(FlowError::NegativeTime(t));
        }
        let coeffs: Vec<f64> = self.factors.iter().map(|f| f.coeff(t)).collect();
        for (i, (f, c)) in self.factors.iter().zip(&coeffs).enumerate() {
            if *c <= 0.0 {
                return Err(FlowError::FactorVanished {
                    factor: i,
                    vanish_time: f.vanish_time().unwrap_or(f64::INFINITY),
                    t,
                });
            }
        }
        Ok(ProductState { t, coeffs })
    }

    /// Eigenvalues `κᵢ / cᵢ(t)` of the Ricci endomorphism.
    pub fn ricci_eigs(&self, t: f64) -> Result<RicciEigs> {
        let state = self.exact_state(t)?;
        Ok(self.ricci_eigs_of(&state))
    }

    pub fn ricci_eigs_of(&self, state: &ProductState) -> RicciEigs {
        let per_factor: Vec<f64> = self
            .factors
            .iter()
            .zip(&state.coeffs)
            .map(|(f, c)| f.kappa / c)
            .collect();
        let min = per_factor.iter().copied().fold(f64::INFINITY, f64::min);
        let max = per_factor.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        RicciEigs {
            per_factor,
            min,
            max,
        }
    }

    /// `log(ω̃ₜⁿ/ω₀ⁿ) = Σ log(cᵢ(t)/cᵢ(0))`, spatially constant.
    pub fn log_volume_ratio(&self, state: &ProductState) -> f64 {
        self.factors
            .iter()
            .zip(&state.coeffs)
            .map(|(f, c)| (c / f.c0).ln())
            .sum()
    }

    /// `∫ ω̃ₜⁿ = n! ∏ cᵢ(t)`.
    pub fn volume(&self, state: &ProductState) -> f64 {
        let n = state.coeffs.len();
        let factorial: f64 = (1..=n).map(|k| k as f64).product();
        factorial * state.coeffs.iter().product::<f64>()
    }
}
