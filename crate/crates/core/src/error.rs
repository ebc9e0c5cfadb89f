use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid triad: {0}")]
    InvalidTriad(String),

    #[error("out of range: {0}")]
    Range(String),

    #[error("cannot allocate {required_bytes} bytes for {what}")]
    Resource { what: String, required_bytes: u128 },

    #[error("singular closed form: {0}")]
    Singularity(String),

    #[error("outside domain: {0}")]
    OutOfDomain(String),

    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
