use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("coordinate {value} at index {index} is outside [0, 1)")]
    CoordinateOutOfRange { index: usize, value: f64 },

    #[error("shape mismatch: expected {expected} coordinates, found {found}")]
    ShapeMismatch { expected: usize, found: usize },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("dimension mismatch: point set has dimension {expected}, box has {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("exact enumeration needs {required} grid points, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    #[error("no slab constant c in (1/84, 1/80] makes N*c/d integral for N={n_points}, d={dim}")]
    NoAdmissibleC { n_points: usize, dim: usize },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),

    #[error("tree depth {depth} exceeds enumeration limit {max}")]
    DepthExceeded { depth: usize, max: usize },

    #[error("invariant violated: {0}")]
    InvariantViolated(String),

    #[error("no successful trials to summarize")]
    NoData,

    #[error("config error on line {line}: {message}")]
    Config { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True when the error reports a violated mathematical invariant, as
    /// opposed to bad input, unmet preconditions or I/O.
    pub fn is_check_failure(&self) -> bool {
        matches!(self, Error::InvariantViolated(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
