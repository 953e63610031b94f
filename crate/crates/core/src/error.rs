use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes shared by every stage of the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("value out of range: {0}")]
    Range(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("signal power is zero, SNR is undefined")]
    UndefinedSnr,

    #[error("matrix has no energy, {0} is undefined")]
    Undefined(&'static str),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("band selects no coefficients")]
    EmptySelection,

    #[error("oracle refused: {0}")]
    OracleGuard(String),

    #[error("malformed {what}: {detail}")]
    Format { what: &'static str, detail: String },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn format(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Format {
            what,
            detail: detail.into(),
        }
    }

    /// True for errors caused by the data or filesystem rather than by the
    /// caller's parameters.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::Io(_) | Error::Format { .. } | Error::UndefinedSnr | Error::Undefined(_)
        )
    }
}
