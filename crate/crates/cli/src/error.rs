use std::fmt;

use tnq_boolean::BoolError;
use tnq_channels::ChanError;
use tnq_counting::CountError;
use tnq_decomp::DecompError;
use tnq_invariants::InvError;
use tnq_tensor::TensorError;

/// Failure class, one per nonzero exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Usage,
    Parse,
    Numeric,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: Kind,
    pub msg: String,
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError { kind: Kind::Usage, msg: msg.into() }
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        CliError { kind: Kind::Numeric, msg: msg.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            Kind::Usage => 1,
            Kind::Parse => 2,
            Kind::Numeric => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.msg)
    }
}

fn tensor_kind(e: &TensorError) -> Kind {
    match e {
        TensorError::Parse { .. } | TensorError::DataLength { .. } | TensorError::NonFinite(_) | TensorError::ZeroDim => {
            Kind::Parse
        }
        _ => Kind::Numeric,
    }
}

impl From<TensorError> for CliError {
    fn from(e: TensorError) -> Self {
        CliError { kind: tensor_kind(&e), msg: e.to_string() }
    }
}

impl From<BoolError> for CliError {
    fn from(e: BoolError) -> Self {
        let kind = match &e {
            BoolError::Header { .. }
            | BoolError::Literal { .. }
            | BoolError::ClauseCount { .. }
            | BoolError::Syntax { .. } => Kind::Parse,
            BoolError::Tensor(t) => tensor_kind(t),
            _ => Kind::Numeric,
        };
        CliError { kind, msg: e.to_string() }
    }
}

impl From<CountError> for CliError {
    fn from(e: CountError) -> Self {
        let kind = match &e {
            CountError::Parse { .. } | CountError::NotCubic { .. } | CountError::NodeRange(..) => Kind::Parse,
            CountError::TooLarge(_) => Kind::Usage,
            _ => Kind::Numeric,
        };
        CliError { kind, msg: e.to_string() }
    }
}

impl From<ChanError> for CliError {
    fn from(e: ChanError) -> Self {
        let kind = match &e {
            ChanError::Dim(_) => Kind::Parse,
            ChanError::Unsupported(_) | ChanError::Basis(_) => Kind::Usage,
            ChanError::Tensor(t) => tensor_kind(t),
            _ => Kind::Numeric,
        };
        CliError { kind, msg: e.to_string() }
    }
}

impl From<DecompError> for CliError {
    fn from(e: DecompError) -> Self {
        let kind = match &e {
            DecompError::Tensor(t) => tensor_kind(t),
            DecompError::Shape(_) | DecompError::Bipartition(_) => Kind::Parse,
            DecompError::Param(_) => Kind::Usage,
            _ => Kind::Numeric,
        };
        CliError { kind, msg: e.to_string() }
    }
}

impl From<InvError> for CliError {
    fn from(e: InvError) -> Self {
        let kind = match &e {
            InvError::Tensor(t) => tensor_kind(t),
            InvError::Shape(_) => Kind::Parse,
            _ => Kind::Numeric,
        };
        CliError { kind, msg: e.to_string() }
    }
}
