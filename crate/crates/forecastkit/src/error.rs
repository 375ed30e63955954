//! Error type shared across the crate.

use thiserror::Error;

/// Unified error for every fallible operation in the crate.
#[derive(Debug, Error)]
pub enum ForecastError {
    /// Input data or configuration failed validation.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Reading or writing a file failed.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// A data file could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// An embedded dataset's checksum did not match its data lines.
    #[error("checksum mismatch for dataset '{name}': expected {expected}, computed {actual}")]
    ChecksumMismatch {
        name: String,
        expected: String,
        actual: String,
    },

    /// No dataset with the requested name is embedded.
    #[error("unknown dataset '{0}' (available: lynx, sunspot, airline, qsales, beer, deaths)")]
    UnknownDataset(String),

    /// A linear system was singular or too ill-conditioned to solve.
    #[error("singular system: {0}")]
    Singular(String),

    /// An online update hit a rank-deficient block and could not proceed.
    #[error("rank-deficient update: {0}")]
    RankDeficient(String),

    /// An iterative optimizer failed to produce a usable result.
    #[error("optimization failed: {0}")]
    OptimFailure(String),

    /// Training loss became non-finite.
    #[error("training diverged at epoch {epoch} (loss {loss})")]
    Divergence { epoch: usize, loss: f64 },

    /// A fitted model violates its stationarity/invertibility conditions.
    #[error("root condition violated: {0}")]
    RootCondition(String),

    /// JSON (de)serialization failed.
    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),

    /// A reproduction check ran to completion but some rows missed their targets.
    #[error("{failed} of {total} reproduction checks failed")]
    CheckFailed { failed: usize, total: usize },
}

impl ForecastError {
    /// Process exit code for this error: 3 for reproduction-check failures,
    /// 2 for everything else (usage errors are handled before this point).
    pub fn exit_code(&self) -> i32 {
        match self {
            ForecastError::CheckFailed { .. } => 3,
            _ => 2,
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, ForecastError>;
