use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: String, found: String },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("unsupported gamma kind for {operation}: {kind}")]
    UnsupportedGamma { operation: &'static str, kind: String },

    #[error("trajectory left the domain at t = {time} (state {state:?})")]
    DomainEscape { time: f64, state: Vec<f64> },

    #[error("non-finite state at t = {time}")]
    BlowUp { time: f64 },

    #[error("horizon |t| = {horizon} needs {needed} steps, more than max_steps = {max_steps}")]
    HorizonExceeded {
        horizon: f64,
        needed: usize,
        max_steps: usize,
    },

    #[error("estimator failed: all {rejected} samples rejected by the differentiability score")]
    EstimatorFailed { rejected: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("quotients at t = {point} are not Cauchy on the {side} (spread {spread:e})")]
    NotOneSidedDifferentiable {
        point: f64,
        side: &'static str,
        spread: f64,
    },

    #[error("linear program failed: {0}")]
    Lp(String),

    #[error("internal consistency violated: {0}")]
    InternalConsistency(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("unknown catalog key `{0}`")]
    UnknownCatalogKey(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn dim(expected: impl ToString, found: impl ToString) -> Self {
        Error::Dimension {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(e.to_string())
    }
}
