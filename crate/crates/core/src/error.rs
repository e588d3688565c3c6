use thiserror::Error;

/// Errors raised by the imputation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A caller-supplied parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// The data itself cannot be processed (all missing, non-finite, zero mass, ...).
    #[error("invalid data: {0}")]
    Data(String),

    /// A closed-form bound or threshold was evaluated outside the hypotheses
    /// under which it is stated.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed file contents.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Short machine-readable name of the error class.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parameter(_) => "parameter",
            Error::Data(_) => "data",
            Error::Domain(_) => "domain",
            Error::Parse { .. } => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
