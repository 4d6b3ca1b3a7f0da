use std::io;

use thiserror::Error;

/// Errors raised anywhere in the pipeline.
///
/// Input problems (`Parse`, `Schema`, `Data`, `Style`) are the caller's fault and
/// map to exit code 1 in the CLI; `Io` failures are reported the same way.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("schema: {0}")]
    Schema(String),

    #[error("{0}")]
    Data(String),

    #[error("stylesheet line {line}: {message}")]
    Style { line: usize, message: String },

    #[error("{0}")]
    Layout(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn data(message: impl Into<String>) -> Self {
        Error::Data(message.into())
    }

    pub(crate) fn style(line: usize, message: impl Into<String>) -> Self {
        Error::Style {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
