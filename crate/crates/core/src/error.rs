use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Mismatched truncation policies or inconsistent configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// A precondition on the mathematical input does not hold.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("model validation failed: {0}")]
    Validation(String),

    #[error("tautological table incomplete: missing g={g} n={n} psi={psi:?} lambda={lambda:?}")]
    TableIncomplete {
        g: u32,
        n: usize,
        psi: Vec<u32>,
        lambda: Vec<u32>,
    },

    #[error("out of scope: {0}")]
    OutOfScope(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
