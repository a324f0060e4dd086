use std::io;
use std::path::PathBuf;

use msface_core::{DatasetError, FeatureError, FusionError, ImagingError, MatchError};
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{}: unsupported image: {detail}", path.display())]
    UnsupportedFormat { path: PathBuf, detail: String },
    #[error("{}: row {row} has {found} cells, expected {expected}", path.display())]
    RaggedRows { path: PathBuf, row: usize, expected: usize, found: usize },
    #[error("{}: row {row}, column {col}: {text:?} is not a number", path.display())]
    NonNumericCell { path: PathBuf, row: usize, col: usize, text: String },
    #[error("{}:{line}: {msg}", path.display())]
    BadCsv { path: PathBuf, line: usize, msg: String },
    #[error("config key `{key}`: {msg}")]
    Config { key: String, msg: String },
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Imaging(#[from] ImagingError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Match(#[from] MatchError),
    #[error(transparent)]
    Fusion(#[from] FusionError),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn config(key: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config { key: key.into(), msg: msg.into() }
    }
}
