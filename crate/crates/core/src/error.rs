use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// `A_{j-1} * A_j != 0`; carries the 1-based index `j` of the right-hand boundary.
    #[error("boundaries A_{} and A_{level} are not orthogonal", level - 1)]
    NotOrthogonal { level: usize },

    #[error("level {level} out of range for a complex of length {length}")]
    LevelOutOfRange { level: usize, length: usize },

    #[error("index {index} out of range for ambient length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("kernel dimension {dim} exceeds enumeration cap {cap}")]
    KernelTooLarge { dim: usize, cap: usize },

    #[error("a + b must be at least 1")]
    InvalidExponents,

    #[error("invalid ensemble spec: {0}")]
    InvalidSpec(String),

    #[error("empty boundary list")]
    EmptyComplex,

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("inconsistent weights: {0}")]
    InconsistentWeights(String),

    #[error("bundle: {0}")]
    Bundle(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
