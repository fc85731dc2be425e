use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Two objects that must live on the same mesh do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A documented precondition of the operation is violated.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// The decomposition window is too wide for the number of fibers.
    #[error("aliasing: {0}")]
    Aliasing(String),
    /// A numerical routine failed to converge or hit a singular system.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// An assembled object failed its own consistency gate.
    #[error("internal consistency: {0}")]
    InternalConsistency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

macro_rules! ensure {
    ($cond:expr, $variant:ident, $($arg:tt)+) => {
        if !$cond {
            return Err($crate::error::Error::$variant(format!($($arg)+)));
        }
    };
}
pub(crate) use ensure;
