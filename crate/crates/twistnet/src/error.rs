use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("label error: {0}")]
    Label(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("size cap exceeded: {0}")]
    Cap(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("modulus mismatch: {0} vs {1}")]
    Modulus(usize, usize),
    #[error("zero norm")]
    ZeroNorm,
    #[error("unknown: {0}")]
    Unknown(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
