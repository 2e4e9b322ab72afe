use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid ring: {0}")]
    InvalidRing(String),

    #[error("invalid symmetry: {0}")]
    InvalidSymmetry(String),

    #[error("enumeration budget of {budget} exceeded")]
    BudgetExceeded { budget: usize },

    #[error("invalid index: {0}")]
    InvalidIndex(String),

    #[error("inadmissible parameter: {0}")]
    Inadmissible(String),

    #[error("matrix is singular")]
    Singular,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("not computable here: {0}")]
    Unavailable(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
