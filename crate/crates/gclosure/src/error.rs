use thiserror::Error;

/// Library-wide error type.
///
/// The variants are grouped by how a caller should react: `Parse` means the
/// input text was malformed, `Capability`/`Guard` mean the request is outside
/// what the implementation supports (never a silent partial answer), and
/// `Internal` means two routes that must agree did not — a bug, surfaced
/// loudly rather than papered over.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("unsupported: {0}")]
    Capability(String),

    #[error("guard exceeded: {what} (limit {limit})")]
    Guard { what: String, limit: String },

    #[error("element is not invariant: tuples {0} and {1} differ")]
    NotInvariant(String, String),

    #[error("inexact division: {0}")]
    Divisibility(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }

    pub fn capability(msg: impl Into<String>) -> Self {
        Error::Capability(msg.into())
    }

    pub fn guard(what: impl Into<String>, limit: impl ToString) -> Self {
        Error::Guard {
            what: what.into(),
            limit: limit.to_string(),
        }
    }
}
