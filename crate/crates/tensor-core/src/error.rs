use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TensorError {
    #[error("leg {leg} out of range for a tensor of order {order}")]
    LegOutOfRange { leg: usize, order: usize },
    #[error("leg {0} listed twice")]
    DuplicateLeg(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("legs paired with the same orientation ({0} and {1})")]
    SameOrientation(usize, usize),
    #[error("index lists have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("expected {expected} entries, got {got}")]
    DataLength { expected: usize, got: usize },
    #[error("non-finite entry at position {0}")]
    NonFinite(usize),
    #[error("zero-dimensional leg")]
    ZeroDim,
    #[error("tensor of shape {shape:?} exceeds the size cap of {cap} entries")]
    SizeCap { shape: Vec<usize>, cap: usize },
    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("{0} did not converge")]
    NoConvergence(&'static str),
    #[error("matrix is singular (condition number {0:e})")]
    Singular(f64),
    #[error("integer overflow computing {0}")]
    Overflow(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type TensorResult<T> = Result<T, TensorError>;
