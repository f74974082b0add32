use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    /// A series with no terms and a finite truncation: it is only known to be
    /// zero up to some power of `t`, so its order cannot be determined.
    #[error("indeterminate order: series is only known to vanish below t^({0})")]
    IndeterminateOrder(String),

    #[error("zero series has no principal coefficient")]
    ZeroSeries,

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("root iteration did not converge after {0} iterations")]
    NonConvergence(usize),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("no root found in backend: {0}")]
    NoRootInBackend(String),

    #[error("indeterminate precision: {0}")]
    IndeterminatePrecision(String),

    #[error("step limit of {0} exceeded")]
    StepLimit(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
}

impl Error {
    /// Stable machine-readable name for the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "division_by_zero",
            Error::IndeterminateOrder(_) => "indeterminate_order",
            Error::ZeroSeries => "zero_series",
            Error::ZeroPolynomial => "zero_polynomial",
            Error::NonConvergence(_) => "non_convergence",
            Error::HypothesisViolated(_) => "hypothesis_violated",
            Error::NoRootInBackend(_) => "no_root_in_backend",
            Error::IndeterminatePrecision(_) => "indeterminate_precision",
            Error::StepLimit(_) => "step_limit",
            Error::InvalidInput(_) => "invalid_input",
            Error::Parse { .. } => "parse",
        }
    }

    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse { position, message: message.into() }
    }
}
