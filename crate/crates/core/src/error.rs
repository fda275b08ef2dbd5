use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The distance-d family construction is only sound for d >= 6.
    #[error("unsupported distance d = {0}; distance-d algorithms require d >= 6")]
    UnsupportedDistance(u32),

    #[error("{what} = {actual} exceeds the exhaustive-search limit of {limit}")]
    SizeLimit {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    Semantic(String),

    #[error("graph contains an induced {k}P3, so it is not {k}P3-free")]
    NotKp3Free { k: u32 },

    #[error("generator gave up after {attempts} attempts: {reason}")]
    GeneratorExhausted { attempts: u32, reason: String },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
