use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid cycle spec: {0}")]
    InvalidSpec(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("instance too large for enumeration: n = {n} exceeds limit {limit}")]
    TooLarge { n: u32, limit: u32 },
    #[error("no real root: p = {0} exceeds 1/8")]
    NoRealRoot(f64),
    #[error("invalid cycle: {0}")]
    InvalidCycle(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
