use thiserror::Error;

use crate::rational::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unsupported dimension {0}: only 2-d moment regions are handled here")]
    UnsupportedDimension(usize),

    #[error("degenerate polygon: {0}")]
    Degenerate(String),

    #[error("not a moment-image region: {0}")]
    InvalidRegion(String),

    #[error("{0}")]
    OutOfRange(String),

    #[error("region is not convex; use the concave engine or a convex input")]
    NotConvex,

    #[error("region is not concave; use the convex engine or a concave input")]
    NotConcave,

    #[error("empty axis list")]
    EmptyAxes,

    #[error("axis values must be positive, got {0}")]
    NonPositive(Rational),

    #[error(
        "weight expansion did not terminate within {steps} steps (residual area {residual_area})"
    )]
    Nontermination {
        steps: usize,
        residual_area: Rational,
    },

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("consistency check failed: {0}")]
    CheckFailed(String),

    #[error("formula self-test failed: {0}")]
    GateFailed(String),

    #[error("invalid domain description: {0}")]
    Schema(String),
}

impl Error {
    /// True for failures caused by the caller's input rather than by a
    /// computation that could not reach a verdict.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::Nontermination { .. }
                | Error::Inconclusive(_)
                | Error::CheckFailed(_)
                | Error::GateFailed(_)
        )
    }
}
