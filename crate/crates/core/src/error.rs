use thiserror::Error;

/// Errors raised by the engine. Mathematical failures of a theorem check are
/// not errors; they are reported through [`crate::verify::VerificationReport`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid ambient n={n}: need n >= 4")]
    InvalidAmbient { n: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("ambient mismatch: expected n={expected}, found n={found}")]
    AmbientMismatch { expected: usize, found: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("balanced weight search gave up after {attempts} candidates")]
    SearchBudgetExceeded { attempts: usize },

    #[error("n={n} exceeds the configured ceiling {max}")]
    ResourceBound { n: usize, max: usize },

    #[error("resource bound exceeded: {0}")]
    TooLarge(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
