use thiserror::Error;

/// Failures shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A quadrature or series did not reach its tolerance; carries the best
    /// estimate so callers can still inspect it.
    #[error("{context}: no convergence (best estimate {value:e}, error estimate {err_est:e})")]
    NonConvergence {
        context: String,
        value: f64,
        err_est: f64,
    },

    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A hypothesis of the operation is not met (e.g. R >= pi for the series).
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("coefficient index {requested} exceeds table limit {limit}")]
    CoefficientLimit { requested: usize, limit: usize },

    /// A bracket whose refined point does not have a small residual.
    #[error("spurious bracket: refined point b = {b} has residual {residual:e} above {zero_tol:e}")]
    SpuriousBracket { b: f64, residual: f64, zero_tol: f64 },
}

impl Error {
    pub fn is_non_convergence(&self) -> bool {
        matches!(self, Error::NonConvergence { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
