use core::fmt;

/// Errors produced by the numeric kernels.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An input violated a domain precondition.
    Domain(&'static str),
    /// A probability vector or stochastic matrix failed its normalization check.
    NotNormalized { sum: f64 },
    /// A numerical procedure failed to converge within its budget.
    Numerical(&'static str),
    /// Matrix / vector dimensions do not agree.
    DimensionMismatch { expected: usize, got: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::NotNormalized { sum } => {
                write!(f, "probabilities sum to {sum}, expected 1")
            }
            Error::Numerical(msg) => write!(f, "numerical error: {msg}"),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
