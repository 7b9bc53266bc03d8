use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = CensusError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum CensusError {
    #[error(transparent)]
    Core(#[from] census_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed input: {0}")]
    Format(String),
    #[error("thread pool: {0}")]
    Pool(String),
}

impl CensusError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CensusError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn format(msg: impl Into<String>) -> Self {
        CensusError::Format(msg.into())
    }

    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            CensusError::Core(census_core::Error::SizeLimitExceeded { .. })
        )
    }
}
