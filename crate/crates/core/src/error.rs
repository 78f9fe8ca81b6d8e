use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("non-finite sample at index {0}")]
    NonFinite(usize),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("signals live on different grids")]
    GridMismatch,
    #[error("expected a {expected} signal")]
    DomainMismatch { expected: &'static str },
    #[error("invalid exponent or weight: {0}")]
    InvalidExponent(String),
    #[error("zero input: {0}")]
    ZeroInput(&'static str),
    #[error("cost gate exceeded: {0}")]
    CostGate(String),
    #[error("block index {k} outside the frequency grid (|k| <= {max})")]
    BlockOutOfRange { k: i64, max: i64 },
    #[error("atom at {0} is not aligned with the grid")]
    NotGridAligned(f64),
    #[error("support overflow: {0}")]
    SupportOverflow(String),
    #[error("domain too small: {0}")]
    DomainTooSmall(String),
    #[error("not in the algebra regime: {0}")]
    NotAlgebra(String),
    #[error("did not converge: {0}")]
    NotConverged(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
