use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("ambient dimension must be at least 1")]
    ZeroDimension,

    #[error("ideal is not m-primary (infinite colength)")]
    NotMPrimary,

    #[error("family member at index {index} is not m-primary")]
    NotMPrimaryMember { index: u64 },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid index {index}: {reason}")]
    InvalidIndex { index: u64, reason: String },

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("oracle limit exceeded: {0}")]
    OracleLimit(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("finite differences did not stabilize by n = {n_max}: {trace}")]
    NoStabilization { n_max: u64, trace: String },

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("unknown output format `{0}`")]
    UnknownFormat(String),
}

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }
}
