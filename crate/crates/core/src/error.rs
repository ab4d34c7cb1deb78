use thiserror::Error;

/// Errors raised by the cohomology engine, the model catalog and the solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlowError {
    #[error("class has {got} coefficients, basis has {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("top intersection needs {expected} classes, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("time must be non-negative and not NaN, got {0}")]
    NegativeTime(f64),

    #[error("degenerate setup: {0}")]
    DegenerateSetup(String),

    #[error("no k in 0..={n} gives a positive mixed intersection; [omega_0]^n = {top}")]
    InconsistentCollapse { n: usize, top: f64 },

    #[error("factor {factor} vanishes at t = {vanish_time}; requested t = {t}")]
    FactorVanished {
        factor: usize,
        vanish_time: f64,
        t: f64,
    },

    #[error("Kähler condition violated at t = {t}, rho = {rho}: {quantity} = {value:e}")]
    KaehlerViolation {
        t: f64,
        rho: f64,
        quantity: &'static str,
        value: f64,
    },

    #[error("Newton iteration did not converge at t = {t} after {halvings} step halvings (residual {residual:e})")]
    NewtonFailure { t: f64, halvings: u32, residual: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("trajectories are not comparable: {0}")]
    Mismatch(String),
}

pub type Result<T> = std::result::Result<T, FlowError>;
