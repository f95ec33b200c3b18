use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{file} line {line}: {message}")]
    Parse { file: &'static str, line: usize, message: String },

    #[error("{file} line {line}: {message}")]
    Range { file: &'static str, line: usize, message: String },

    #[error("invalid hypergraph: {0}")]
    Validation(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("insufficient population for k={k}: {available} nodes with positive weight")]
    InsufficientPopulation { k: usize, available: usize },

    #[error("state space of {states:.3e} ordered tuples exceeds the enumeration limit of {limit:.0e}")]
    Capacity { states: f64, limit: f64 },

    #[error("value out of domain: {0}")]
    Domain(String),

    #[error("nothing to analyze: {0}")]
    EmptyAnalysis(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
