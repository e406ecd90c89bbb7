use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid body: {0}")]
    InvalidBody(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("point is not in the body (violation {violation:.3e})")]
    NotInBody { violation: f64 },

    #[error("point is not on the boundary of the body")]
    NotOnBoundary,

    #[error("origin is not contained in the body")]
    OriginNotContained,

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("empty sample")]
    EmptySample,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Self::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
