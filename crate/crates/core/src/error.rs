use num_complex::Complex64;
use thiserror::Error;

/// Every failure a public operation can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of {what} at {at}")]
    Pole { what: &'static str, at: Complex64 },

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("series did not converge within {terms} terms")]
    NoConvergence { terms: usize },

    #[error("quadrature error estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    QuadratureFailure { estimate: f64, tolerance: f64 },

    #[error("point pair on the diagonal singularity (sigma = {sigma})")]
    Singularity { sigma: f64 },

    #[error("group sum diverges: Re(s) = {re_s} must exceed 1")]
    Convergence { re_s: f64 },

    #[error("winding number depends on the base point ({first} vs {second})")]
    Consistency { first: f64, second: f64 },

    #[error("no multiplier sign convention passes (best residual {residual:e})")]
    Convention { residual: f64 },

    #[error("ball enumeration needs more than {cap} candidates")]
    BudgetExceeded { cap: usize },

    #[error("test function outside decay class: {0}")]
    ClassViolation(String),

    #[error("tail bound {tail:e} exceeds requested tolerance {tolerance:e}")]
    TailTooLarge { tail: f64, tolerance: f64 },

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("config error at `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
