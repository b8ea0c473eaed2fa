use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// No magnetic field brings the mode to the requested frequency.
    #[error("no solution: target {target_thz} THz lies below the minimum attainable {minimum_thz} THz")]
    NoSolution { target_thz: f64, minimum_thz: f64 },

    /// The eigensolver exhausted its iteration budget or failed its residual check.
    #[error("eigensolver failed to converge (worst relative residual {worst_residual:e})")]
    NonConvergence { worst_residual: f64 },

    /// Other numerical breakdown (non-positive Bogoliubov norm, singular stack, ...).
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    /// A peak could not be matched to the polariton spectrum.
    #[error("branch assignment failed: {0}")]
    Assignment(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
