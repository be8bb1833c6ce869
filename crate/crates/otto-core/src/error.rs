use std::path::PathBuf;

use thiserror::Error;

use crate::qubit::BasisTag;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum OttoError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("basis mismatch: expected {expected:?}, found {found:?}")]
    BasisMismatch { expected: BasisTag, found: BasisTag },

    #[error("degenerate spectrum: {0}")]
    Degenerate(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("operation requires {required} regime, flows classify as {found}")]
    WrongRegime { required: &'static str, found: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, OttoError>;
