use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Dimensions of an input do not agree with what the operation needs.
    #[error("shape error: {0}")]
    Shape(String),

    /// A parameter lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The Schmidt decomposition of the zero operator is not defined.
    #[error("undefined decomposition: {0}")]
    UndefinedDecomposition(String),

    /// An input violated a documented precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A construction does not apply to the requested parameters.
    #[error("construction not applicable: {0}")]
    NotApplicable(String),

    /// An exhaustive certificate search found a case without a witness.
    #[error("certification failure: {0}")]
    CertificationFailure(String),

    /// A constructed object failed its own consistency check.
    #[error("verification failed: {0}")]
    Verification(String),

    /// Reading or writing a file failed.
    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
