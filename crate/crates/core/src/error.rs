use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Precondition violated by the caller.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A numerical kernel hit the floor of usable resolution.
    #[error("degenerate resolution: {0}")]
    Resolution(String),

    /// A point image left the numeric range during zipper iteration.
    #[error("resolution failure at point index {index}: {reason}")]
    ResolutionAt { index: usize, reason: String },

    /// A conditioned walk has nowhere to go.
    #[error("conditioning impossible: {0}")]
    ConditioningImpossible(String),

    /// Report files with incompatible schemas cannot be merged.
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
