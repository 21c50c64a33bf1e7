use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("not a self map")]
    NotSelfMap,
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("invalid fold: {0}")]
    InvalidFold(String),
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("decomposition failed: {0}")]
    Decomposition(String),
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
