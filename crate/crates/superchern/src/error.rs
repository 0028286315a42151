use thiserror::Error;

/// Errors shared across the algebra and transport layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable count mismatch: {0} vs {1}")]
    VarMismatch(usize, usize),
    #[error("variable index {index} out of range for {n_vars} variables")]
    VarIndex { index: usize, n_vars: usize },
    #[error("point length {0} does not match {1} variables")]
    PointLength(usize, usize),
    #[error("index tuple must be strictly increasing")]
    IndexTuple,
    #[error("matrix shape mismatch")]
    ShapeMismatch,
    #[error("graded shape must have p + q >= 1")]
    EmptyShape,
    #[error("entry count {0} does not match shape dimension {1}")]
    EntryCount(usize, usize),
    #[error("argument is not homogeneous in total parity")]
    InhomogeneousParity,
    #[error("A' must be odd")]
    APrimeNotOdd,
    #[error("connection form must be a block-diagonal 1-form")]
    BadConnectionForm,
    #[error("matrix is not nilpotent within bound {0}; use numeric mode")]
    NotNilpotent(usize),
    #[error("series requires {required} terms, above max order {max_order}")]
    MaxOrderExceeded { required: usize, max_order: usize },
    #[error("non-finite value in numeric evaluation")]
    NonFinite,
    #[error("syntax error at column {col}: {msg}")]
    Parse { col: usize, msg: String },
    #[error("invalid spec: {0}")]
    Spec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
