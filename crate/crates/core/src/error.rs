use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The caller supplied something outside an operation's domain.
    #[error("invalid input: {0}")]
    Input(String),

    /// An iterative solver ran out of budget. The bounds are still valid.
    #[error("not converged after {iterations} iterations: value lies in [{lower}, {upper}]")]
    NotConverged {
        lower: f64,
        upper: f64,
        iterations: usize,
    },

    /// A result that should hold by construction did not.
    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
