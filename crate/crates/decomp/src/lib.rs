//! Schmidt decompositions, matrix product states and entanglement measures.

mod measures;
mod mps;
mod schmidt;

pub use measures::*;
pub use mps::*;
pub use schmidt::*;

use tnq_tensor::TensorError;

#[derive(Debug, thiserror::Error)]
pub enum DecompError {
    #[error("invalid bipartition: {0}")]
    Bipartition(String),
    #[error("negative input value {0}")]
    Negative(f64),
    #[error("input is not normalized (norm^2 = {0}); pass the normalize flag")]
    Unnormalized(f64),
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is not positive semidefinite (eigenvalue {0:.3e})")]
    NotPsd(f64),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

pub type DecompResult<T> = Result<T, DecompError>;

/// Tolerance on `sum sigma^2 = 1` before a spectrum counts as unnormalized.
pub const NORM_TOL: f64 = 1e-9;

/// Outcome of discarding singular values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    /// Frobenius norm of the discarded part, `sqrt(sum of discarded sigma^2)`
    pub error: f64,
    /// rank actually kept
    pub kept: usize,
    /// set when the requested rank exceeded the available rank
    pub clamped: bool,
}

pub(crate) fn truncation_error(sigma: &[f64], r: usize) -> f64 {
    sigma.iter().skip(r).map(|s| s * s).sum::<f64>().sqrt()
}
