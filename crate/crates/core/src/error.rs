use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole list is empty")]
    EmptyInput,
    #[error("pole {index} lies on the real axis")]
    RealPole { index: usize },
    #[error("pole {index} duplicates an earlier pole location")]
    DuplicatePole { index: usize },
    #[error("pole {index} has zero multiplicity")]
    ZeroMultiplicity { index: usize },
    #[error("pole {index} has a non-finite coordinate")]
    NonFinite { index: usize },
    #[error("evaluation point coincides with pole {index}")]
    EvalAtPole { index: usize },
    #[error("evaluation point coincides with the conjugate of pole {index}")]
    EvalAtConjugatePole { index: usize },
    #[error("scale factor must be positive and finite")]
    NonpositiveScale,
    #[error("unsupported exponent p = {0} (need 1 < p <= inf)")]
    UnsupportedExponent(f64),
    #[error("invalid symmetric configuration: {0}")]
    InvalidConfiguration(String),
    #[error("convergence failure: {0}")]
    ConvergenceFailure(String),
    #[error("index {index} out of range (largest valid index is {max})")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("antisymmetrization annihilated every pole")]
    DegenerateCancellation,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("invalid search configuration: {0}")]
    InvalidSearchConfig(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    /// True for failures of an iterative numerical method, as opposed to
    /// invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::ConvergenceFailure(_))
    }
}

pub type Result<V, E = Error> = std::result::Result<V, E>;
