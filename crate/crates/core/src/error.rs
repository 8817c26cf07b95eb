use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("missing table entry: {0}")]
    MissingTable(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("bound error: {0}")]
    Bound(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
