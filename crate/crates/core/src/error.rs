use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |M - M†| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("eigenvalue {value:e} is below the PSD noise floor; input is not a state")]
    NegativeEigenvalue { value: f64 },

    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("invalid prior: {0}")]
    InvalidPrior(String),

    #[error("invalid payoff table: {0}")]
    InvalidPayoff(String),

    #[error("invalid box constraint on coordinate {index}: [{lower}, {upper}]")]
    InvalidBox { index: usize, lower: f64, upper: f64 },

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
