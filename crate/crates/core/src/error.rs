use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource limit exceeded: {requested} qubits requested, limit is {limit}")]
    ResourceLimit { requested: usize, limit: usize },

    #[error("degenerate interpolation: {0}")]
    DegenerateInterpolation(String),

    #[error("approximation ratio undefined: spectrum is constant")]
    UndefinedRatio,

    #[error("objective returned a non-finite value {value} at {point:?}")]
    NonFiniteObjective { value: f64, point: Vec<f64> },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("optimizer failure: {0}")]
    Optimizer(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
