use thiserror::Error;

/// Error type shared by the whole crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A precondition on the mathematical domain was violated
    /// (non-idempotent argument to an order test, mismatched degrees, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Integer arithmetic left the supported 64-bit range.
    #[error("range error: {0}")]
    Range(&'static str),

    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),

    /// An internal consistency check failed; this indicates a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
