use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Objective vectors of different lengths were compared.
    #[error("objective dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// An operation was called with arguments violating its contract.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An algorithm or problem configuration is invalid.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// The requested quantity is not defined for this problem.
    #[error("{0}")]
    Domain(String),

    /// A diversity-metric computation could not be carried out.
    #[error("metric error: {0}")]
    Metric(String),

    /// An experiment plan could not be parsed or validated.
    #[error("plan error: {0}")]
    Plan(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
