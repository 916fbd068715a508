use thiserror::Error;

use crate::inclusion::InclusionVerdict;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{function} is undefined at {value}")]
    Domain { function: &'static str, value: f64 },

    #[error("quadrature did not converge after {subdivisions} subdivisions (error estimate {error:e}, target {target:e})")]
    NonConvergence {
        subdivisions: usize,
        error: f64,
        target: f64,
    },

    #[error("divergent quantity: {0}")]
    Divergent(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unsupported kernel family for this operation: {0}")]
    UnsupportedFamily(String),

    #[error("coefficient {index} is negative ({value})")]
    NegativeCoefficient { index: usize, value: f64 },

    #[error("eigensolver failure: {0}")]
    Eigen(String),

    #[error("symbolic and numeric engines disagree")]
    Disagreement {
        symbolic: Box<InclusionVerdict>,
        numeric: Box<InclusionVerdict>,
    },

    #[error("parse error at {position}: {message}")]
    Parse { position: String, message: String },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Whether the error comes from bad input rather than a numerical failure.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Domain { .. }
                | Error::DimensionMismatch { .. }
                | Error::InvalidParameter { .. }
                | Error::UnsupportedFamily(_)
                | Error::NegativeCoefficient { .. }
                | Error::Parse { .. }
                | Error::Divergent(_)
        )
    }
}
