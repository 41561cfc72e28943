use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{what} out of range: {detail}")]
    OutOfRange { what: &'static str, detail: String },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("projection levels are not monotone in k at level {level}")]
    InconsistentLevels { level: usize },

    #[error("direct stationary sampling requires a symmetric model (p = 1/2), got p = {p}")]
    BiasedModel { p: f64 },

    #[error("operation not defined for model {model}")]
    WrongModel { model: String },

    #[error("model {model} is not supported by {operation}")]
    ModelUnsupported { model: String, operation: &'static str },

    #[error("coupled states are not ordered (expected first <= second)")]
    NotOrdered,

    #[error("initial states are incomparable in the partial order")]
    Incomparable,

    #[error("no coalescence before lookback {lookback}")]
    Timeout { lookback: f64 },

    #[error("state space has {size} states, above the cap of {cap}")]
    TooLarge { size: u128, cap: usize },

    #[error("stationary solve failed: {0}")]
    SolveFailure(String),

    #[error("probability vector not normalized (sum = {sum})")]
    NotNormalized { sum: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("resource error: {0}")]
    Resource(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn out_of_range(what: &'static str, detail: impl Into<String>) -> Error {
    Error::OutOfRange {
        what,
        detail: detail.into(),
    }
}
