use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("dimension or field mismatch: {0}")]
    Mismatch(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("singular evaluation: {0}")]
    Singular(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown catalog entry {0:?}")]
    UnknownEntry(String),
    #[error("not a tight design: {0}")]
    NotTight(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
