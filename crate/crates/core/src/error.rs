use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("category is not loop-free: {0}")]
    NotLoopFree(String),
    #[error("diagram is not functorial: {0}")]
    NotFunctorial(String),
    #[error("diagram is not bounded: {0}")]
    NotBounded(String),
    #[error("mismatched inputs: {0}")]
    Mismatch(String),
    #[error("value category failure: {0}")]
    Value(String),
    #[error("schema error at {path}: {msg}")]
    Schema { path: String, msg: String },
    #[error("unsupported schema version {0}")]
    UnsupportedVersion(u32),
    #[error("dangling reference: {0}")]
    Dangling(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
