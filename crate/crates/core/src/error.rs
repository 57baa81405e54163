use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed group or generator description. `offset` is a byte offset
    /// into the text that was being parsed.
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    /// A size limit was hit. `partial` is how far the computation got.
    #[error("{what} exceeds cap {cap} (reached {partial})")]
    Limit {
        what: &'static str,
        cap: usize,
        partial: usize,
    },

    #[error("malformed {what}: {message}")]
    Format { what: &'static str, message: String },

    /// Element of the wrong kind or shape for the group it was used with.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(offset: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            message: message.into(),
        }
    }

    pub(crate) fn format(what: &'static str, message: impl Into<String>) -> Self {
        Error::Format {
            what,
            message: message.into(),
        }
    }

    pub(crate) fn precondition(message: impl Into<String>) -> Self {
        Error::Precondition(message.into())
    }

    pub fn is_limit(&self) -> bool {
        matches!(self, Error::Limit { .. })
    }
}
