use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("problem graph is not connected ({components} components)")]
    Disconnected { components: usize },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("schedule format error at row {row}: {reason}")]
    ScheduleFormat { row: usize, reason: String },

    #[error("annealing parameter s = {0} is outside [0, 1]")]
    Domain(f64),

    #[error("{what} supports at most N = {cap} spins, got N = {n}")]
    Capacity { what: &'static str, n: usize, cap: usize },

    #[error("eigensolver failed to converge (residual {residual:e})")]
    Numeric { residual: f64 },

    #[error("operation requires M = 2 objectives, got M = {0}")]
    UnsupportedDimension(usize),

    #[error("metric undefined: {0}")]
    UndefinedMetric(String),

    #[error("output already exists: {}", .0.display())]
    OutputExists(PathBuf),

    #[error("missing input: {}", .0.display())]
    MissingInput(PathBuf),

    #[error("malformed results file {}: {reason}", .path.display())]
    Malformed { path: PathBuf, reason: String },

    #[error("at s = {s}, omega_1 = {omega1}: {source}")]
    Cell {
        s: f64,
        omega1: f64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Strips [`Error::Cell`] annotations down to the underlying cause.
    pub fn root(&self) -> &Error {
        match self {
            Error::Cell { source, .. } => source.root(),
            other => other,
        }
    }
}
