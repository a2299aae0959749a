use thiserror::Error;

use crate::quadrature::QuadResult;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    /// A series hit its term cap before its tail fell below tolerance.
    #[error("series in {func} did not converge within {terms} terms")]
    SeriesConvergence { func: &'static str, terms: usize },

    /// Adaptive quadrature could not meet its tolerance; `partial` holds the
    /// best estimate reached.
    #[error("quadrature did not converge: value {} +/- {}", .partial.value, .partial.err_est)]
    QuadConvergence { partial: QuadResult },

    /// The integrand returned a non-finite value.
    #[error("non-finite integrand value at x = {x}")]
    Evaluation { x: f64 },

    #[error("overflow in {0}")]
    Overflow(&'static str),

    #[error("unsupported combination: {0}")]
    Unsupported(String),

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

    /// True for failures of the numerics (as opposed to bad arguments).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SeriesConvergence { .. }
                | Error::QuadConvergence { .. }
                | Error::Evaluation { .. }
                | Error::Overflow(_)
        )
    }
}
