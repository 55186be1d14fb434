use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{what}: size {got} exceeds cap {cap}")]
    SizeLimit {
        what: &'static str,
        got: usize,
        cap: usize,
    },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
