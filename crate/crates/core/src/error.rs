use thiserror::Error;

/// Errors raised by graph construction, solvers and bound evaluation.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An instance exceeds a configured size cap or enumeration budget.
    #[error("sizing error: {what} is {estimate}, exceeding the limit of {limit}{hint}")]
    Sizing {
        what: String,
        estimate: String,
        limit: String,
        hint: String,
    },

    /// An exact count does not fit the fixed-width integer used to hold it.
    #[error("overflow: {0}")]
    Overflow(String),

    /// Reading or writing a results file failed.
    #[error("i/o error: {0}")]
    Io(String),

    /// A results file or input document is malformed.
    #[error("format error: {0}")]
    Format(String),

    /// A result contradicts a known invariant; indicates a bug, not bad input.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn sizing(
        what: impl Into<String>,
        estimate: impl ToString,
        limit: impl ToString,
    ) -> Self {
        Error::Sizing {
            what: what.into(),
            estimate: estimate.to_string(),
            limit: limit.to_string(),
            hint: String::new(),
        }
    }

    pub(crate) fn with_hint(self, text: &str) -> Self {
        match self {
            Error::Sizing {
                what,
                estimate,
                limit,
                ..
            } => Error::Sizing {
                what,
                estimate,
                limit,
                hint: format!("; {text}"),
            },
            other => other,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Format(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
