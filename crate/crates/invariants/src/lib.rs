//! Polynomial invariants of states under local group actions, symmetrizers
//! and binary-form covariants.

mod forms;
mod local;
mod symmetry;
mod trace;

pub use forms::*;
pub use local::*;
pub use symmetry::*;
pub use trace::*;

use tnq_gates::GateError;
use tnq_netgraph::NetError;
use tnq_tensor::TensorError;

#[derive(Debug, thiserror::Error)]
pub enum InvError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("state is not symmetric (deviation {0:.3e})")]
    NotSymmetric(f64),
    #[error("invalid permutation {0:?}")]
    Permutation(Vec<usize>),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Gate(#[from] GateError),
}

pub type InvResult<T> = Result<T, InvError>;
