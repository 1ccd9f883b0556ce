use thiserror::Error;

/// Errors raised by the spin-dynamics library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid spin quantum number {0}: must be a positive half-integer")]
    InvalidSpin(f64),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("hamiltonian mode error: {0}")]
    Mode(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("state must have unit trace, got {0}")]
    Normalization(f64),

    #[error("degenerate state: trace {0} is not positive")]
    DegenerateState(f64),

    #[error("kraus operators are not complete (max deviation {0:e})")]
    KrausCompleteness(f64),

    #[error("regime error: {0}")]
    Regime(String),

    #[error("measure undefined: {0}")]
    UndefinedMeasure(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("insufficient horizon: tail weight e^(-k t_max) = {0:e} exceeds 1e-10")]
    InsufficientHorizon(f64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
