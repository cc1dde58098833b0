use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("out of range: {0}")]
    Range(String),
    #[error("resource guard: {0}")]
    Resource(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("precision target not met: {message}")]
    Precision {
        message: String,
        /// Best available value when the failure happened mid-computation.
        partial: Option<f64>,
    },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("checkpoint integrity: {0}")]
    Integrity(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn precision(message: impl Into<String>) -> Self {
        Error::Precision {
            message: message.into(),
            partial: None,
        }
    }
}
