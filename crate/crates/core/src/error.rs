//! Crate-wide error type.

use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by generators, analyzers and deciders.
///
/// The CLI maps these onto exit codes: `Input`, `Precondition` and `Size`
/// are invalid-input failures (exit 2), `Budget` means a search budget was
/// exhausted before the requested certainty was reached (exit 3).
#[derive(Debug)]
pub enum Error {
    /// Malformed input: bad letters, empty words, unknown names, bad specs.
    Input(String),
    /// An operation's precondition does not hold (e.g. morphism not
    /// prolongeable on the requested letter).
    Precondition(String),
    /// A search or scan budget was exhausted without an answer.
    Budget(String),
    /// A requested enumeration would exceed the supported size range.
    Size(String),
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Input(msg) => write!(f, "invalid input: {msg}"),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::Budget(msg) => write!(f, "budget exhausted: {msg}"),
            Error::Size(msg) => write!(f, "size out of range: {msg}"),
            Error::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}
