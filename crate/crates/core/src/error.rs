use thiserror::Error;

/// Errors shared by every module of the workbench.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("rejected input: {0}")]
    InvalidInput(String),

    #[error("point is not on the upper sheet of the hyperboloid: {0}")]
    InvalidPoint(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("could not bracket root: {0}")]
    NumericBracket(String),

    #[error("integration failure: {0}")]
    Integration(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("degenerate quadratic form")]
    DegenerateForm,

    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
