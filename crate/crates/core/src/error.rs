use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("SVD failed at cut {cut}: {reason}")]
    Numerical { cut: usize, reason: String },

    #[error("precision failure: {0}")]
    Precision(String),

    #[error("inconsistent engine output: {0}")]
    InconsistentEngine(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
