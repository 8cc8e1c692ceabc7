use thiserror::Error;

/// Errors raised by the algebraic constructions in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input data is malformed: ragged tables, unknown labels, bad JSON.
    #[error("malformed input: {0}")]
    Structural(String),
    /// The operation is defined, but not for these arguments.
    #[error("domain error: {0}")]
    Domain(String),
    /// The backend does not implement the requested operation.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// An enumeration would exceed its configured bound.
    #[error("bound exceeded: {0}")]
    Resource(String),
    #[error("parse error: {0}")]
    Parse(String),
    /// Gluing data whose transition maps fail the cocycle condition.
    #[error("cocycle condition fails on charts ({i}, {j}, {k}): {detail}")]
    Descent {
        i: usize,
        j: usize,
        k: usize,
        detail: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
