//! Bundled scenarios, one per flow regime.
//!
//! | name            | model                    | T          | K | regime              |
//! |-----------------|--------------------------|------------|---|---------------------|
//! | `f1-contract`   | 𝔽₁, `4H - E`             | `log 2`    | 0 | finite-noncollapsed |
//! | `f1-fiber`      | 𝔽₁, `5H - 2E`            | `log(5/2)` | 1 | finite-collapsed    |
//! | `p1p1-collapse` | ℙ¹×ℙ¹, `(1, 2)`          | `log(3/2)` | 1 | finite-collapsed    |
//! | `p1p1-shrink`   | ℙ¹×ℙ¹, `(1, 1)`          | `log(3/2)` | 2 | finite-collapsed    |
//! | `sigma2xT2`     | Σ₂×T², `(3, 1)`          | `∞`        | 1 | infinite-singular   |
//! | `torus2`        | T²×T², `(1, 1)`          | `∞`        | 2 | convergent          |
//! | `sigma2xsigma2` | Σ₂×Σ₂, `(3, 3)`          | `∞`        | 0 | convergent          |
//!
//! Conventions: curve factors carry unit-volume forms with `κ = 2, 0, -2`
//! for ℙ¹, T², Σ₂, so `c₁ = (κᵢ)`. On 𝔽₁ classes are `bH - aE`, stored as
//! `(b, -a)` in the basis `(H, E)`, and `c₁ = 3H - E`.

use super::{RunnerError, ScenarioConfig};

const SOURCES: [(&str, &str); 7] = [
    ("f1-contract", include_str!("../../scenarios/f1-contract.toml")),
    ("f1-fiber", include_str!("../../scenarios/f1-fiber.toml")),
    ("p1p1-collapse", include_str!("../../scenarios/p1p1-collapse.toml")),
    ("p1p1-shrink", include_str!("../../scenarios/p1p1-shrink.toml")),
    ("sigma2xT2", include_str!("../../scenarios/sigma2xT2.toml")),
    ("torus2", include_str!("../../scenarios/torus2.toml")),
    ("sigma2xsigma2", include_str!("../../scenarios/sigma2xsigma2.toml")),
];

pub fn names() -> Vec<&'static str> {
    SOURCES.iter().map(|(n, _)| *n).collect()
}

/// TOML source of a bundled scenario.
pub fn source(name: &str) -> Option<&'static str> {
    SOURCES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn get(name: &str) -> Result<ScenarioConfig, RunnerError> {
    let text = source(name).ok_or_else(|| RunnerError::UnknownScenario(name.to_string()))?;
    ScenarioConfig::from_toml_str(text)
}

pub fn all() -> Vec<ScenarioConfig> {
    names()
        .into_iter()
        .map(|n| get(n).expect("bundled scenarios are valid"))
        .collect()
}
