use thiserror::Error;

/// Errors raised by the algebraic routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or inconsistent input (arity mismatch, out of range index, ...).
    #[error("invalid input: {0}")]
    Input(String),
    /// A mathematical precondition of the operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// An explicit computational bound was exceeded.
    #[error("resource bound exceeded: {0}")]
    Resource(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

macro_rules! input_err {
    ($($arg:tt)*) => { $crate::error::Error::Input(format!($($arg)*)) };
}
pub(crate) use input_err;
