use thiserror::Error;

/// Errors raised by construction, verification and analysis routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("duplicate index {0}")]
    DuplicateIndex(usize),

    #[error("matrix is rank deficient: rank {rank} < {rows} rows")]
    RankDeficient { rank: usize, rows: usize },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("not available: {0}")]
    NotAvailable(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("probing condition fails at order {order}: columns {witness:?} are dependent")]
    ProbingInsecure { order: usize, witness: Vec<usize> },

    #[error("forcing condition fails at order {order}: columns {witness:?} are dependent")]
    ForcingInsecure { order: usize, witness: Vec<usize> },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, CodeError>;
