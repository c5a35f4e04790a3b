//! Boolean functions and their quantum-state images.
//!
//! Variable `x1` is the most significant bit of a basis index, so the
//! assignment `(x1, .., xn)` sits at index `sum x_i 2^(n-i)`.

mod circuit;
mod cnf;
mod count;
mod function;
mod states;

pub use circuit::*;
pub use cnf::*;
pub use count::*;
pub use function::*;
pub use states::*;

use tnq_gates::GateError;
use tnq_netgraph::NetError;
use tnq_tensor::TensorError;

#[derive(Debug, thiserror::Error)]
pub enum BoolError {
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("variable index {index} out of range for {n_vars} variables")]
    VarIndex { index: usize, n_vars: usize },
    #[error("line {line}: bad DIMACS header: {msg}")]
    Header { line: usize, msg: String },
    #[error("line {line}: literal {literal} out of range for {n_vars} variables")]
    Literal { line: usize, literal: i64, n_vars: usize },
    #[error("header declares {expected} clauses, found {found}")]
    ClauseCount { expected: usize, found: usize },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("bad truth table: {0}")]
    Truth(String),
    #[error("contraction result {0} is not an integer within 1e-6")]
    Residue(String),
    #[error("circuit wiring is cyclic")]
    Cyclic,
    #[error("dangling wire: {0}")]
    Dangling(String),
    #[error("term `{0}` is not diagonal")]
    NonDiagonal(String),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Gate(#[from] GateError),
}

pub type BoolResult<T> = Result<T, BoolError>;
