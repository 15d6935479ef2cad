use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("γ = 0 with negative γ exponent in polynomial evaluation")]
    ZeroGammaNegativeExponent,

    #[error("length mismatch: expected {expected} arguments, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    #[error("{func} did not converge after {iterations} iterations; last bracket [{lo:e}, {hi:e}]")]
    NoConvergence {
        func: &'static str,
        iterations: usize,
        lo: f64,
        hi: f64,
    },

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            func,
            detail: detail.into(),
        }
    }
}
