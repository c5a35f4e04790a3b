//! Named gates and states, Pauli strings and stabilizer checks.
//!
//! Boolean tensors are stored with 0/1 amplitudes unless a constructor is
//! asked to normalize.

mod catalogue;
mod laws;
mod pauli;
mod stabilizer;

pub use catalogue::*;
pub use laws::*;
pub use pauli::{Pauli, PauliString};
pub use stabilizer::*;

use tnq_netgraph::NetError;
use tnq_tensor::TensorError;

#[derive(Debug, thiserror::Error)]
pub enum GateError {
    #[error("unknown tensor name `{0}`")]
    UnknownName(String),
    #[error("bad parameters for {name}: {reason}")]
    BadParams { name: String, reason: String },
    #[error("operator is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("cannot parse Pauli string `{0}`")]
    PauliParse(String),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Net(#[from] NetError),
}

pub type GateResult<T> = Result<T, GateError>;
