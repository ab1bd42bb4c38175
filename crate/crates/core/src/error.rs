use thiserror::Error;

/// Failures raised by the analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter {name} = {value}: must be positive and finite")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("state ({y}, {z}) is outside the nonnegative quadrant or not finite")]
    InvalidState { y: f64, z: f64 },

    #[error("non-finite state at orbit index {index}")]
    NonFiniteState { index: usize },

    #[error("max_steps must be at least 1")]
    ZeroSteps,

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("persistence bound undefined: initial state ({y}, {z}) has a zero coordinate")]
    PersistenceUndefined { y: f64, z: f64 },

    #[error("comparison seeds must be positive, got ({x0}, {w0})")]
    NonPositiveSeed { x0: f64, w0: f64 },

    #[error("resonant case ab = pq: closed-form comparison solution does not apply")]
    DegenerateRatio,

    #[error("no positive equilibrium: ab/(pq) = {ratio} is not greater than 1")]
    NoPositiveEquilibrium { ratio: f64 },

    #[error("argument {x} is outside the domain of {function}")]
    Domain { function: &'static str, x: f64 },

    #[error("root function does not change sign on [{lo}, {hi}] (values {f_lo}, {f_hi})")]
    SolverBracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("solver residual {residual:e} above tolerance {tol:e} after {iterations} iterations")]
    Convergence {
        residual: f64,
        tol: f64,
        iterations: usize,
    },

    #[error("need at least two usable states for an audit, found {usable}")]
    InsufficientData { usable: usize },

    #[error("the W-positive functional requires a positive equilibrium")]
    MissingEquilibrium,
}

pub type Result<T> = std::result::Result<T, Error>;
