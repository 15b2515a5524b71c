use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    #[error("invalid label set: {0}")]
    Labeling(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("probability {0} outside [0, 1]")]
    Probability(f64),

    #[error("input dimension {din} exceeds the optimizer limit of {limit}")]
    TooLarge { din: usize, limit: usize },

    #[error("objective is not finite: {0}")]
    NonFinite(String),
}

impl Error {
    pub(crate) fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
