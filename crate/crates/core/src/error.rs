//! Error types shared by every evaluator in the crate.

use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(#[from] DomainError),
    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },
    #[error("overflow: {0}")]
    Overflow(&'static str),
}

impl Error {
    pub(crate) fn out_of_range(name: &'static str, value: f64, requirement: &'static str) -> Self {
        Error::Domain(DomainError::OutOfRange { name, value, requirement })
    }

    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain(_))
    }
}

/// Why an argument was rejected.
///
/// The bound certifiers name every failed precondition separately so callers
/// (and the CLI) can report exactly which gate an input tripped.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainError {
    NotFinite(&'static str),
    OutOfRange { name: &'static str, value: f64, requirement: &'static str },
    NotHalfOdd(f64),
    /// Order at or below the 0.5 floor required by the rounding bounds.
    OrderFloor { name: &'static str, value: f64 },
    /// `M - N` smaller than one.
    OrderSpacing { m: f64, n: f64 },
    /// Fractional parts of `M` and `N` differ.
    FractionalMismatch { m: f64, n: f64 },
    NonPositiveArgument { name: &'static str, value: f64 },
    AlphaBelowOne(f64),
}

impl fmt::Display for DomainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainError::NotFinite(name) => write!(f, "{name} must be finite"),
            DomainError::OutOfRange { name, value, requirement } => {
                write!(f, "{name} = {value} out of range: requires {requirement}")
            }
            DomainError::NotHalfOdd(v) => write!(f, "{v} is not a half-odd integer (k + 0.5, k >= 0)"),
            DomainError::OrderFloor { name, value } => {
                write!(f, "order floor: {name} = {value} must exceed 0.5")
            }
            DomainError::OrderSpacing { m, n } => {
                write!(f, "order spacing: M - N = {} must be at least 1", m - n)
            }
            DomainError::FractionalMismatch { m, n } => {
                write!(f, "fractional mismatch: M = {m} and N = {n} must share their fractional part")
            }
            DomainError::NonPositiveArgument { name, value } => {
                write!(f, "nonpositive argument: {name} = {value} must be > 0")
            }
            DomainError::AlphaBelowOne(a) => write!(
                f,
                "alpha below 1: standard-Nuttall monotonicity not guaranteed (alpha = {a})"
            ),
        }
    }
}

impl std::error::Error for DomainError {}

pub(crate) fn require_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(DomainError::NotFinite(name).into())
    }
}
