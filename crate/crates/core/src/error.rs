use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("asymmetric preferences: node {lists} lists {missing}, but {missing} does not list {lists}")]
    Asymmetric { lists: usize, missing: usize },

    #[error("instance has {nodes} nodes, above the oracle limit of {limit}")]
    SizeGuard { nodes: usize, limit: usize },

    /// A certificate produced by this crate failed its own re-validation.
    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn internal(msg: impl Into<String>) -> Error {
    Error::Internal(msg.into())
}
