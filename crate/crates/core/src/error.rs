use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported dimension {0}: the decomposition needs n >= 3")]
    UnsupportedDimension(usize),

    #[error("degenerate metric: {0}")]
    DegenerateMetric(String),

    #[error("invalid location {index}: {reason}")]
    InvalidLocation { index: usize, reason: String },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("unsupported check: {0}")]
    UnsupportedCheck(String),

    #[error("line {line}: key `{key}`: {message}")]
    Usage {
        line: usize,
        key: String,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn usage(line: usize, key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Usage {
            line,
            key: key.into(),
            message: message.into(),
        }
    }
}
