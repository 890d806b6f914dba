use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: grid of {left} nodes vs grid of {right} nodes")]
    Dimension { left: usize, right: usize },

    #[error("point kind mismatch: {0}")]
    Kind(String),

    #[error("non-finite value {value} at {context}")]
    NonFinite { value: f64, context: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("mapping left the carrier at iterate {index}: {reason}")]
    Escaped { index: usize, reason: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("oracle failed to converge after {iterations} iterations (last update {last_update:e})")]
    Oracle { iterations: usize, last_update: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
