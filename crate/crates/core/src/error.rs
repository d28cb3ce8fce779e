use thiserror::Error;

use crate::lp::LpError;

/// Errors raised by the geometry, measure and functional layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("subspace dimension {k} out of range for ambient dimension {n}")]
    SubspaceDimension { n: usize, k: usize },
    #[error("matrix is not symmetric positive definite")]
    NotPositiveDefinite,
    #[error("matrix is singular")]
    Singular,
    #[error("decomposition residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    Residual { residual: f64, tolerance: f64 },
    #[error("degenerate body: {0}")]
    DegenerateBody(String),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("quadrature did not reach tolerance {tolerance:.1e} (estimate {estimate:.6e}, error {error:.1e})")]
    Quadrature { estimate: f64, error: f64, tolerance: f64 },
    #[error("target {target} outside the bracketed range [{lo}, {hi}]")]
    RootNotBracketed { target: f64, lo: f64, hi: f64 },
    #[error("minimization did not converge within {evaluations} evaluations")]
    Minimization { evaluations: usize },
    #[error("iteration did not converge: {0}")]
    NonConverged(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{pointer}: {message}")]
    Parse { pointer: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
