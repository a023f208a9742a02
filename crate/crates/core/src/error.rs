use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// The requested table would not fit the configured in-memory limit;
    /// callers should fall back to [`crate::sieve::stream_squarefree`].
    #[error("range [{lo}, {hi}] exceeds the in-memory table limit of {limit} entries; use segmented streaming")]
    RangeTooLarge { lo: u64, hi: u64, limit: u64 },

    #[error("128-bit overflow in exact rational arithmetic")]
    Overflow,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// A computation was refused because it would exceed a resource limit.
    /// Never accompanied by a partial answer.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
