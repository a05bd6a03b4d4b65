use thiserror::Error;

/// Errors raised by the library.
///
/// [`Error::Defect`] is reserved for broken internal invariants (an inexact
/// division, a tripped recursion guard). Everything else is a caller error.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("format violation: {0}")]
    FormatViolation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    #[error("internal defect: {0}")]
    Defect(String),
}

impl Error {
    pub fn is_defect(&self) -> bool {
        matches!(self, Error::Defect(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
