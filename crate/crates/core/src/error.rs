//! Error type shared by the whole crate.
//!
//! The three variants map onto the CLI exit codes: usage errors (2),
//! I/O and serialization failures (3), internal invariant breaches (4).

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// The caller violated a precondition.
    #[error("usage: {0}")]
    Usage(String),

    /// A file could not be read, written or parsed.
    #[error("i/o: {0}")]
    Io(String),

    /// An internal consistency check failed; results are not trustworthy.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
