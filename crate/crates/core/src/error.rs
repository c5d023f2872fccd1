use thiserror::Error;

/// Errors raised by the symbolic and geometric machinery.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid digit {0}: alphabet is {{0,1,2}}")]
    InvalidDigit(u8),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Domain(String),
    #[error("word too short: need {needed} observable symbols, have {available}")]
    TooShort { needed: usize, available: usize },
    #[error("reference word is not maximal (shift {0} exceeds it)")]
    NotMaximal(usize),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
