use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A bandit configuration or environment is inconsistent.
    #[error("configuration error: {0}")]
    Config(String),

    /// An iterative numeric routine failed to converge.
    #[error("{0} did not converge")]
    Convergence(&'static str),

    /// A trace line could not be parsed.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A parsed trace violates a structural invariant.
    #[error("invalid trace: {0}")]
    Validation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
