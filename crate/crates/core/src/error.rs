use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A parse failure with a 1-based source location.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed or inconsistent arguments (lengths, counts, ranges).
    #[error("invalid argument: {0}")]
    Argument(String),
    /// A value outside the mathematical domain of a model.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("capacity exceeded: {what} is {found}, limit is {limit}")]
    Capacity {
        what: &'static str,
        found: usize,
        limit: usize,
    },
    /// A requested configuration cannot be realized.
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
}

pub(crate) fn arg_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}

pub(crate) fn domain_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
