use thiserror::Error;

use crate::pattern::Kind;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("invalid edge: {0}")]
    InvalidEdge(String),

    #[error("pattern uniformity {pattern} exceeds host uniformity {host}")]
    UniformityMismatch { pattern: usize, host: usize },

    #[error("detector for {expected} called with a {found} pattern")]
    KindMismatch { expected: Kind, found: Kind },

    #[error("no host size in [{lo}, {hi}] arrows")]
    NotFound { lo: usize, hi: usize },

    #[error("search budget exhausted at n = {n}")]
    Indeterminate { n: usize },

    #[error("construction {name} violates its guarantee in color {color}")]
    ConstructionFailed { name: String, color: u8 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameters(msg.into())
}
