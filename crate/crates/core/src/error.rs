use thiserror::Error;

/// Errors raised by the solver kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("step size underflow at x = {x} (h = {h:e})")]
    Stiffness { x: f64, h: f64 },

    #[error("x = {0} lies outside the well (|x| >= 1)")]
    OutsideWell(f64),

    #[error("potential is singular at x = 0")]
    Singularity,

    #[error("no sign change for level n = {n} in energy window [{lo}, {hi}]")]
    BracketFailure { n: usize, lo: f64, hi: f64 },

    #[error("level is not a converged eigenvalue: {0}")]
    State(String),

    #[error("approximation undefined: {0}")]
    ApproximationDomain(String),

    #[error("approximation failed: {0}")]
    ApproximationFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
