use thiserror::Error;

/// Failures reported by every operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A precondition on the inputs does not hold.
    #[error("domain error: {0}")]
    Domain(String),

    /// Materialization would exceed the configured symbol budget.
    #[error("resource budget exhausted: {what} needs {requested} symbols, budget is {budget}")]
    Budget {
        what: String,
        requested: usize,
        budget: usize,
    },

    /// Morphism text could not be parsed.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// An internal invariant failed. Indicates a bug, never a valid answer.
    #[error("invariant violation: {0}")]
    Invariant(String),

    /// A certificate did not replay.
    #[error("certificate rejected: {0}")]
    Certificate(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    pub(crate) fn budget(what: impl Into<String>, requested: usize, budget: usize) -> Self {
        Error::Budget {
            what: what.into(),
            requested,
            budget,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
