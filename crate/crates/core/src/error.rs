use thiserror::Error;

/// Errors produced by the solvers and file handling in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid {field}: {message}")]
    Validation { field: String, message: String },

    #[error("{what} is not strictly positive; use the general enumeration path instead")]
    NotPositive { what: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no convergence after {iterations} iterations (last residual {residual:e})")]
    NonConvergence {
        iterations: usize,
        residual: f64,
        last_iterate: Vec<f64>,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("player {player} is indifferent at round {round}: the opponent strategy maps to zero")]
    Indifferent { round: usize, player: usize },

    #[error("{what} has size {size}, above the configured cap {cap}")]
    ExceedsCap {
        what: String,
        size: usize,
        cap: usize,
    },

    #[error("insufficient data: need at least {needed} points, have {found}")]
    InsufficientData { needed: usize, found: usize },

    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    /// True for failures of an iterative method (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NonConvergence { .. } | Error::Numerical(_))
    }
}
