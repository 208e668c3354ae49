use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A numeric argument outside the domain where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Caller broke a shape or length contract.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("image too small for radius: {0}")]
    ImageTooSmall(String),

    /// Linear algebra failed (singular scatter, rank-deficient data, ...).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Training data admits no discriminating direction.
    #[error("degenerate model: {0}")]
    Degenerate(String),

    #[error("not derived: {0}")]
    NotDerived(String),

    #[error("malformed data: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
