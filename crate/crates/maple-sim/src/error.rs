//! Error type shared by all simulator operations.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input text (Matrix Market header, size line, entry line,
    /// energy table line, ...).
    #[error("parse error: {0}")]
    Parse(String),

    /// An index fell outside the matrix dimensions.
    #[error("index out of bounds: {0}")]
    Bounds(String),

    /// Input uses a feature the simulator deliberately does not handle.
    #[error("unsupported input: {0}")]
    Unsupported(String),

    /// A desk-scale guard or a buffer capacity was exceeded.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Operand dimensions do not agree.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Invalid accelerator configuration or unknown preset.
    #[error("configuration error: {0}")]
    Config(String),

    /// Energy table violates positivity or the cost-ordering constraint.
    #[error("energy table error: {0}")]
    Table(String),

    /// Reports being compared do not describe the same run.
    #[error("comparison error: {0}")]
    Comparison(String),

    /// File-system failure, annotated with the path involved.
    #[error("io error at {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
