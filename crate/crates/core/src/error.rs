use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Caller violated a precondition (bad index, size mismatch, bad option).
    #[error("usage error: {0}")]
    Usage(String),
    /// Problem too large for the requested method.
    #[error("capacity error: {0}")]
    Capacity(String),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! usage {
    ($($arg:tt)*) => {
        $crate::Error::Usage(format!($($arg)*))
    };
}
pub(crate) use usage;
