use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input data violates a precondition (dimensions, channel count, empty lists).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A configuration is not a legal point of the variable space.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: cannot decode image: {reason}", path.display())]
    Decode { path: PathBuf, reason: String },

    #[error("{}: unsupported format: {reason}", path.display())]
    UnsupportedFormat { path: PathBuf, reason: String },

    #[error("{}: missing {what}", dir.display())]
    MissingFrame { dir: PathBuf, what: String },

    #[error("{}: no usable scene directories", path.display())]
    EmptyDataset { path: PathBuf },

    #[error("csv {}: {reason}", path.display())]
    Csv { path: PathBuf, reason: String },

    #[error("measurement error: {0}")]
    Measurement(String),

    /// An error raised inside one stage of a multi-stage pipeline.
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Strips any stage tags and returns the underlying error.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }

    /// `true` for usage and configuration problems, `false` for
    /// environment problems (files, decoding, measurement).
    pub fn is_usage(&self) -> bool {
        matches!(self.root(), Error::InvalidInput(_) | Error::Config(_))
    }
}

pub(crate) trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Result<T>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: &'static str) -> Result<T> {
        self.map_err(|e| Error::Stage {
            stage,
            source: Box::new(e),
        })
    }
}
