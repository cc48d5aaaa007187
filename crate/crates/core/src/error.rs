use thiserror::Error;

#[derive(Debug, Error)]
pub enum EapError {
    /// Argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Request would materialize too much data; use a closed-form path.
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("invalid configuration field `{field}`: {message}")]
    Config { field: String, message: String },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, EapError>;

impl EapError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        EapError::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        EapError::Precondition(msg.into())
    }

    pub fn config(field: &str, message: impl Into<String>) -> Self {
        EapError::Config { field: field.to_string(), message: message.into() }
    }
}
