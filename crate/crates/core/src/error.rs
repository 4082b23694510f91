use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("not in kernel: {0}")]
    NotInKernel(String),

    #[error("not a delta-kernel element: {0}")]
    NotDeltaKernel(String),

    #[error("size guard exceeded: {0}")]
    SizeGuard(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn parse(offset: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: msg.into(),
        }
    }
}
