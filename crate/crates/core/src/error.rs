use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("{stage}: domain error: {message}")]
    Domain {
        stage: &'static str,
        message: String,
    },

    /// The requested range contains nothing to work with.
    #[error("{stage}: empty domain: {message}")]
    EmptyDomain {
        stage: &'static str,
        message: String,
    },

    #[error("{stage}: insufficient span: window length {length} but sequence span is {span}")]
    InsufficientSpan {
        stage: &'static str,
        length: f64,
        span: f64,
    },

    #[error("{stage}: insufficient data: {message}")]
    InsufficientData {
        stage: &'static str,
        message: String,
    },

    /// Checkpoint or cross-check contradiction.
    #[error("integrity error: {0}")]
    Integrity(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn domain(stage: &'static str, message: impl Into<String>) -> Self {
        Error::Domain {
            stage,
            message: message.into(),
        }
    }

    pub(crate) fn insufficient(stage: &'static str, message: impl Into<String>) -> Self {
        Error::InsufficientData {
            stage,
            message: message.into(),
        }
    }

    /// True for errors caused by the numbers rather than by the caller.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::Integrity(_) | Error::Numeric(_))
    }
}
