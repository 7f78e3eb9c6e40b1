use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("entries from different fields: {0} and {1}")]
    MixedField(String, String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("operation requires a single variable (n = 1), got n = {0}")]
    NotUnivariate(usize),
    #[error("characteristic polynomial does not split over the field")]
    NonSplit,
    #[error("enumeration needs {needed} items, cap is {cap}")]
    CapExceeded { needed: u128, cap: u128 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
