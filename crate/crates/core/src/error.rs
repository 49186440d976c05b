use thiserror::Error;

/// Errors raised by the estimation and testing routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("domain violation: {0}")]
    DomainViolation(String),
    #[error("invalid order p = {0}, expected p in [1, inf]")]
    InvalidOrder(f64),
    #[error("degenerate interval [{0}, {1}]")]
    DegenerateInterval(f64, f64),
    #[error("invalid bandwidth t_n = {0}, expected t_n > 0")]
    InvalidBandwidth(f64),
    #[error("invalid resample: weights sum to {got}, expected {expected}")]
    InvalidResample { got: u64, expected: u64 },
    #[error("no bootstrap draws")]
    NoBootstrapDraws,
    #[error("undefined tuning: {0}")]
    UndefinedTuning(String),
    #[error("path leaves the model: t = {0}")]
    PathLeavesModel(f64),
    #[error("missing capability: {0}")]
    MissingCapability(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("malformed function: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
