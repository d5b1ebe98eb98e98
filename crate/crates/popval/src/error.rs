//! Error type shared across the crate.

use std::fmt;

/// Everything that can go wrong in this crate.
///
/// The variants map onto distinct failure classes so callers (in particular
/// the CLI) can translate them into distinct exit statuses:
/// invalid inputs ([`Error::Domain`], [`Error::Config`], [`Error::Parse`],
/// [`Error::Io`]), numeric trouble ([`Error::NonConvergence`],
/// [`Error::Degenerate`]), and broken internal guarantees
/// ([`Error::Invariant`]).
#[derive(Debug)]
pub enum Error {
    /// An argument was outside the mathematical domain of the operation.
    Domain(String),
    /// The data admit no informative statistic (e.g. a Z denominator of zero
    /// with equal proportions, or a zero sum of squared deviations).
    Degenerate(String),
    /// An iterative numeric routine failed to converge within its cap.
    NonConvergence(String),
    /// A scenario/config description was inconsistent or incomplete.
    Config(String),
    /// Malformed textual input (CSV, config file); carries location info.
    Parse(String),
    /// A computed result violated an invariant that should always hold.
    Invariant(String),
    /// Underlying I/O failure.
    Io(std::io::Error),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Degenerate(msg) => write!(f, "degenerate data: {msg}"),
            Error::NonConvergence(msg) => write!(f, "numeric non-convergence: {msg}"),
            Error::Config(msg) => write!(f, "config error: {msg}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::Invariant(msg) => write!(f, "invariant violation: {msg}"),
            Error::Io(err) => write!(f, "io error: {err}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(err) => Some(err),
            _ => None,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err)
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn degenerate(msg: impl Into<String>) -> Error {
    Error::Degenerate(msg.into())
}

pub(crate) fn invariant(msg: impl Into<String>) -> Error {
    Error::Invariant(msg.into())
}

pub(crate) fn config(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

pub(crate) fn parse(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub(crate) fn non_convergence(msg: impl Into<String>) -> Error {
    Error::NonConvergence(msg.into())
}
