use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("joint dimension {requested} exceeds the configured cap {cap}")]
    Resource { requested: usize, cap: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("integrity check failed: {0}")]
    Integrity(String),
}

pub type Result<T> = std::result::Result<T, Error>;
