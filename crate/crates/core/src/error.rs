use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A fuzzy system, membership function or pipeline setting is malformed.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("failed to decode image {path}: {source}")]
    Decode {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error("failed to encode image {path}: {source}")]
    Encode {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },

    #[error("invalid image: {0}")]
    InvalidImage(String),

    /// The edge FIS produced no white at all, so the map cannot be normalized.
    #[error("degenerate image: edge response is zero everywhere")]
    DegenerateImage,

    #[error("insufficient data in ROI {roi}: {reason}")]
    InsufficientData { roi: u8, reason: String },

    #[error("training error: {0}")]
    Training(String),

    #[error("{path}: {source}")]
    Pipeline {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },

    #[error("manifest error at line {line}: {message}")]
    Manifest { line: usize, message: String },

    #[error("model format version mismatch: file has {found}, expected {expected}")]
    VersionMismatch { found: i64, expected: i64 },

    #[error("invalid model: {0}")]
    InvalidModel(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn at_path(self, path: impl Into<PathBuf>) -> Self {
        Error::Pipeline {
            path: path.into(),
            source: Box::new(self),
        }
    }
}
