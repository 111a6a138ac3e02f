//! Error type shared by every fallible operation in the crate.

use thiserror::Error;

/// Errors raised by parameter validation, guarded thresholds, work budgets,
/// root searches, and graph I/O.
#[derive(Debug, Error)]
pub enum EngineError {
    /// An input lies outside the documented domain of the operation.
    #[error("invalid parameter {name} = {value}: {message}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        message: &'static str,
    },

    /// A parameter is inside the evaluable domain but below the threshold
    /// for which the quantity is actually proved; callers may explicitly
    /// override when exploring.
    #[error("{name} = {value} is not above the required threshold {threshold}")]
    BelowThreshold {
        name: &'static str,
        value: f64,
        threshold: f64,
    },

    /// A requested computation exceeds its configured work budget or size cap.
    #[error("{what} needs ~{required:.3e} units, budget is {budget:.3e}")]
    BudgetExceeded {
        what: &'static str,
        required: f64,
        budget: f64,
    },

    /// A root search failed to bracket or converge (indicates a bug or an
    /// input far outside the intended regime).
    #[error("root search failed: {0}")]
    RootSearch(String),

    /// Reading or writing a graph file failed.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// A graph file did not match the expected text format.
    #[error("malformed graph file: {0}")]
    MalformedGraph(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, EngineError>;
