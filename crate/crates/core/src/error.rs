use thiserror::Error;

/// Errors raised by the analysis routines.
///
/// The variants mirror the failure classes a caller can act on: bad input
/// values, a malformed strategy, a request beyond what can be enumerated,
/// and parameters outside the domain of a theorem-backed routine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("contract error: {0}")]
    Contract(String),
    #[error("capability error: {0}")]
    Capability(String),
    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn capability(msg: impl Into<String>) -> Self {
        Error::Capability(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
