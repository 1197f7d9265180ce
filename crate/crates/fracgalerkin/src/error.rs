use std::io;
use std::path::PathBuf;

use fracgalerkin_core::Error as CoreError;

/// Errors of the command layer, each mapped to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("{0}")]
    Usage(String),
    #[error("config {path}: {msg}")]
    Config { path: PathBuf, msg: String },
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
    #[error(transparent)]
    Numeric(#[from] CoreError),
}

impl AppError {
    pub fn usage(msg: impl Into<String>) -> Self {
        AppError::Usage(msg.into())
    }

    pub(crate) fn io(context: impl Into<String>, source: io::Error) -> Self {
        AppError::Io { context: context.into(), source }
    }

    /// Bad parameters are usage errors (1); a numerical routine that could not
    /// meet its accuracy target is a mathematical failure (2).
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Numeric(CoreError::AccuracyFailure(_)) => 2,
            _ => 1,
        }
    }
}

pub type AppResult<T> = Result<T, AppError>;
