use thiserror::Error;

use crate::expr::ParseError;
use crate::pg::Subspace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PgError {
    #[error("operands live in different scalar environments")]
    RingMismatch,
    #[error("invalid nilpotency order l = {0}; l must be at least 2")]
    InvalidOrder(usize),
    #[error("dimension mismatch: l = {left} vs l = {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("deformation parameters differ (q vs q^-1)")]
    ParamMismatch,
    #[error("variable mismatch: expected {expected}, found {found}")]
    VariableMismatch { expected: String, found: String },
    #[error("index ({i}, {j}) lies outside I_{l}")]
    IndexOutOfRange { i: usize, j: usize, l: usize },
    #[error("expected {expected} values, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("division is not exact in the Laurent ring")]
    InexactDivision,
    #[error("weight w{0} is zero")]
    SingularWeight(usize),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("element does not lie in the {0} subspace")]
    WrongSubspace(Subspace),
    #[error("weights are not all positive, so {0} is not a Hilbert space")]
    NotHilbert(Subspace),
    #[error("value is not a constant: {0}")]
    NotConstant(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T, E = PgError> = std::result::Result<T, E>;
