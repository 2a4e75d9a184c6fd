use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A time lies outside the support of a sampled coupling table.
    #[error("time {t} lies outside the coupling table range [{start}, {end}]")]
    OutOfRange { t: f64, start: f64, end: f64 },

    /// Adaptive quadrature exhausted its subdivision budget.
    #[error("quadrature did not converge: best estimate {estimate} with error bound {error_bound}")]
    QuadratureNonConvergence { estimate: f64, error_bound: f64 },

    /// The adaptive integrator was forced below its minimum step size.
    #[error("integrator step size underflow in block {block} at t = {t} (h = {step})")]
    StepUnderflow { block: usize, t: f64, step: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for failures raised by a numerical kernel rather than by bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::QuadratureNonConvergence { .. } | Error::StepUnderflow { .. } | Error::Numerical(_)
        )
    }
}
