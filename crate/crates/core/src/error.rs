use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("probability {value} is outside [0, 1]")]
    ProbabilityOutOfRange { value: f64 },
    #[error("insertion point {value} is outside (0, 1]")]
    PointOutOfRange { value: f64 },
    #[error("label must be 0 or 1, got {value}")]
    InvalidLabel { value: i64 },
    #[error("offload cost beta = {value} must lie in [0, 1); with beta >= 1 never offloading is optimal")]
    InvalidOffloadCost { value: f64 },
    #[error("merge tolerance delta_min = {value} must lie in [0, 1)")]
    InvalidDeltaMin { value: f64 },
    #[error("learning rate eta = {value} must be positive and finite")]
    InvalidLearningRate { value: f64 },
    #[error("exploration probability epsilon = {value} must lie in (0, 1]")]
    InvalidEpsilon { value: f64 },
    #[error("trace is empty")]
    EmptyTrace,
    #[error("malformed ledger: {0}")]
    MalformedLedger(String),
    #[error("point {value} is not an interval boundary; insert it before updating weights")]
    NotABoundary { value: f64 },
    #[error("exploratory offload without a revealed label")]
    MissingFeedback,
    #[error("invalid tuning input: {0}")]
    InvalidTuning(String),
    #[error("invalid experiment plan: {0}")]
    InvalidPlan(String),
}
