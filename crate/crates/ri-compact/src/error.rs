use thiserror::Error;

/// Crate-wide error type. Variants carry the offending field or value so the
/// CLI can report actionable messages and map them to exit codes.
#[derive(Debug, Error)]
pub enum Error {
    /// A constructor or operation received an argument outside its contract.
    #[error("invalid argument `{field}`: {reason}")]
    InvalidArgument { field: String, reason: String },

    /// A space descriptor fails all admissibility conditions.
    #[error("inadmissible space spec: {0}")]
    InadmissibleSpace(String),

    /// A query falls outside the classifier's or an oracle's coverage.
    #[error("out of scope: {0}")]
    OutOfScope(String),

    /// An iterative numerical procedure exhausted its budget before meeting
    /// its tolerance. Never silent: the partial value and bound are reported.
    #[error("numerical budget exhausted in {context}: value ~{value}, error bound {error_bound}")]
    BudgetExhausted {
        context: String,
        value: f64,
        error_bound: f64,
    },

    /// An inner integral diverges (profile violates the standing assumption).
    #[error("divergent integral: {0}")]
    Divergent(String),

    /// Malformed input document (CLI schema layer).
    #[error("schema error in field `{field}`: {reason}")]
    Schema { field: String, reason: String },
}

impl Error {
    pub fn invalid(field: &str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            field: field.to_string(),
            reason: reason.into(),
        }
    }

    pub fn schema(field: &str, reason: impl Into<String>) -> Self {
        Error::Schema {
            field: field.to_string(),
            reason: reason.into(),
        }
    }
}
