use thiserror::Error;

/// Everything that can go wrong inside the engines.
///
/// `Guard` marks requests that are well-formed but exceed a hard size limit;
/// front-ends map it to a different exit status than plain validation failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("profile weights disagree: expected {expected}, found {found}")]
    WeightMismatch { expected: usize, found: usize },

    #[error("{what} out of range: {detail}")]
    OutOfRange { what: &'static str, detail: String },

    #[error("guard exceeded: {0}")]
    Guard(String),

    #[error("alphabet truncated at m_max={m_max} but weight {needed} is required")]
    InsufficientTruncation { m_max: usize, needed: usize },

    #[error("division by zero: {0}")]
    DivisionByZero(String),

    #[error("content function undefined at {0}")]
    ContentUndefined(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown layout: {0}")]
    UnknownLayout(String),
}

impl Error {
    pub(crate) fn out_of_range(what: &'static str, detail: impl Into<String>) -> Self {
        Error::OutOfRange {
            what,
            detail: detail.into(),
        }
    }

    pub(crate) fn guard(detail: impl Into<String>) -> Self {
        Error::Guard(detail.into())
    }

    pub fn is_guard(&self) -> bool {
        matches!(self, Error::Guard(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
