use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// The article produced no eligible vocabulary words, so no benchmark
    /// score can be computed.
    #[error("article has no eligible words (empty vocabulary)")]
    EmptyArticle,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: row {row}: {message}")]
    CsvFormat {
        path: PathBuf,
        row: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Hn(#[from] crate::hnclient::HnError),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
