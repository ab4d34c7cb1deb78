//! Numerical laboratory for the normalized Kähler–Ricci flow
//! `∂ω̃/∂t = -Ric(ω̃) - ω̃` on symmetric model manifolds.
//!
//! * [`cohomology`]: class ODE, singularity time, collapse exponent, cone checks.
//! * [`models`]: Kähler–Einstein curve products and the Calabi ansatz on 𝔽₁.
//! * [`solver`]: backward-Euler/Newton stepper for the reduced potential flow.
//! * [`diagnostics`]: Ricci, metric, volume and α-integral monitors, fits, verdicts.
//! * [`runner`]: scenario configuration, catalog, CSV/JSON output, sweeps, reports.

pub mod cohomology;
pub mod diagnostics;
pub mod error;
pub mod models;
pub mod runner;
pub mod solver;

pub use error::{FlowError, Result};
