use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("unknown wavelet `{0}`")]
    UnknownWavelet(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("undefined: {0}")]
    Undefined(String),

    #[error("training diverged at epoch {epoch}: loss is {loss}")]
    Divergence { epoch: usize, loss: f64 },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }

    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }

    /// True for errors caused by bad caller input rather than by IO or by
    /// the computation itself.
    pub fn is_argument_error(&self) -> bool {
        matches!(
            self,
            Error::Shape(_) | Error::Argument(_) | Error::UnknownWavelet(_)
        )
    }
}
