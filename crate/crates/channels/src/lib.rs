//! Completely positive maps in five representations.
//!
//! Matrices are vectorized by column stacking: `|A>> = sum_ij A_ij |j>|i>`.
//! The Choi matrix is `sum_ij |i><j| (x) E(|i><j|)` with input factor first,
//! so `Tr Choi = d_in` for trace-preserving maps.

mod aapt;
mod basis;
mod channel;
mod chx;
mod composite;
mod fidelity;
pub mod library;

pub use aapt::*;
pub use basis::*;
pub use channel::*;
pub use chx::*;
pub use composite::*;
pub use fidelity::*;

use nalgebra::DMatrix;
use tnq_tensor::{TensorError, C64};

pub type Mat = DMatrix<C64>;

/// Absolute tolerance of the structural checks.
pub const CHECK_TOL: f64 = 1e-9;

#[derive(Debug, thiserror::Error)]
pub enum ChanError {
    #[error("dimension mismatch: {0}")]
    Dim(String),
    #[error("map is not completely positive: Choi eigenvalue {0}")]
    NotCp(f64),
    #[error("bad operator basis: {0}")]
    Basis(String),
    #[error("reshuffled input state is singular (condition number {0:e})")]
    Singular(f64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

pub type ChanResult<T> = Result<T, ChanError>;
