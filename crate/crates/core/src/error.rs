use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid dimensions {dims:?}: {reason}")]
    InvalidDims {
        dims: Vec<usize>,
        reason: &'static str,
    },

    #[error("mode {mode} out of range for an order-{order} tensor")]
    ModeOutOfRange { mode: usize, order: usize },

    #[error("a rank-one tensor needs at least one factor")]
    EmptyFactors,

    #[error("matrix is identically zero")]
    ZeroMatrix,

    #[error(
        "power iteration did not converge after {iterations} iterations (residual {residual:e})"
    )]
    NotConverged { iterations: usize, residual: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("codepoint {index} of factor {factor} does not fit in {bits} bits")]
    InvalidCodepoint { factor: usize, index: u32, bits: u8 },

    #[error("malformed feedback message: {0}")]
    MalformedMessage(String),

    #[error("trial {trial} failed: {source}")]
    TrialFailed { trial: usize, source: Box<Error> },
}

impl Error {
    /// True for failures of the numerics (as opposed to bad input or configuration).
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::NotConverged { .. } | Error::ZeroMatrix => true,
            Error::TrialFailed { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}
