use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Validation(String),

    #[error("p must be even and at least 2 (got {0})")]
    UnsupportedP(u32),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("monomial count {count} exceeds the configured cap of {cap} columns")]
    Capacity { count: u128, cap: usize },

    #[error("matrix has numerical rank zero")]
    RankZero,

    #[error("barrier violated: {0}")]
    SingularBarrier(String),

    #[error("no admissible candidate at step {step} (best gap {best_gap:e})")]
    Infeasible { step: usize, best_gap: f64 },

    #[error("{which} potential rose from {before:e} to {after:e} at step {step}")]
    PotentialIncrease {
        step: usize,
        which: &'static str,
        before: f64,
        after: f64,
    },

    #[error("weighted sum is singular (lambda_min = {lambda_min:e})")]
    RankDeficient { lambda_min: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_)
            | Error::UnsupportedP(_)
            | Error::DimensionMismatch { .. }
            | Error::Capacity { .. }
            | Error::RankZero => 1,
            Error::SingularBarrier(_)
            | Error::Infeasible { .. }
            | Error::PotentialIncrease { .. }
            | Error::RankDeficient { .. } => 2,
            Error::Parse(_) | Error::Io(_) => 3,
        }
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
