use thiserror::Error;

/// Errors raised across the calculus.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("polynomial is not divisible: {0}")]
    NotDivisible(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid web: {0}")]
    InvalidWeb(String),
    #[error("web is irreducible within the step budget ({0} steps)")]
    Irreducible(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
