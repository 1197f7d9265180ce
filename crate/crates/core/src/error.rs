use alloc::string::String;
use core::fmt;

/// Errors reported by the numerical routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside the documented range, or two shapes disagree.
    InvalidArgument(String),
    /// Sampled data is unusable (non-finite values).
    InvalidInput(String),
    /// The requested quantity is undefined for this input (e.g. a zero denominator).
    DegenerateInput(String),
    /// An internal accuracy target could not be met.
    AccuracyFailure(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(m) => write!(f, "invalid argument: {m}"),
            Error::InvalidInput(m) => write!(f, "invalid input: {m}"),
            Error::DegenerateInput(m) => write!(f, "degenerate input: {m}"),
            Error::AccuracyFailure(m) => write!(f, "accuracy target not met: {m}"),
        }
    }
}

impl core::error::Error for Error {}
