use std::fmt;

use serde_json::json;

pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

/// An error on its way to stderr, with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub kind: String,
    pub message: String,
}

impl Failure {
    pub fn validation(kind: &str, message: impl Into<String>) -> Self {
        Self {
            code: EXIT_VALIDATION,
            kind: kind.to_string(),
            message: message.into(),
        }
    }

    pub fn numerical(kind: &str, message: impl Into<String>) -> Self {
        Self {
            code: EXIT_NUMERICAL,
            kind: kind.to_string(),
            message: message.into(),
        }
    }

    pub fn to_json(&self) -> String {
        json!({
            "error": self.kind,
            "message": self.message,
            "exit_code": self.code,
        })
        .to_string()
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

fn kind_of(e: &spf_core::Error) -> &'static str {
    use spf_core::Error::*;
    match e {
        EmptyInput => "empty_input",
        RealPole { .. } => "real_pole",
        DuplicatePole { .. } => "duplicate_pole",
        ZeroMultiplicity { .. } => "zero_multiplicity",
        NonFinite { .. } => "non_finite",
        EvalAtPole { .. } => "eval_at_pole",
        EvalAtConjugatePole { .. } => "eval_at_conjugate_pole",
        NonpositiveScale => "nonpositive_scale",
        UnsupportedExponent(_) => "unsupported_exponent",
        InvalidConfiguration(_) => "invalid_configuration",
        ConvergenceFailure(_) => "convergence_failure",
        IndexOutOfRange { .. } => "index_out_of_range",
        DomainError(_) => "domain_error",
        DegenerateCancellation => "degenerate_cancellation",
        DegenerateInput(_) => "degenerate_input",
        InvalidSearchConfig(_) => "invalid_search_config",
        Parse(_) => "parse",
    }
}

impl From<spf_core::Error> for Failure {
    fn from(e: spf_core::Error) -> Self {
        let kind = kind_of(&e);
        if e.is_numerical() {
            Self::numerical(kind, e.to_string())
        } else {
            Self::validation(kind, e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::validation("io", e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Self::validation("parse", e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Self::validation("io", e.to_string())
    }
}
