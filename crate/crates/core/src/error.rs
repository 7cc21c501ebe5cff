use thiserror::Error;

/// Errors raised by the library.
///
/// Most variants describe a violated precondition on caller input; the
/// [`Error::Numerical`] and [`Error::Internal`] variants describe failures of
/// the computation itself.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("valuation of zero")]
    ValuationOfZero,
    #[error("bad reduction: polynomial drops degree modulo {ell}")]
    BadReduction { ell: u64 },
    #[error("not integral at {ell}")]
    NotIntegral { ell: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("missing eigenvalue at q = {q}")]
    MissingEigenvalue { q: u64 },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// True when the error is caused by the caller's input rather than by the
    /// computation.
    pub fn is_precondition(&self) -> bool {
        !matches!(self, Error::Numerical(_) | Error::Internal(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
