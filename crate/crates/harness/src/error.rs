use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("bad config: {0}")]
    Config(String),
    #[error("{path}: {message}", path = .0.display(), message = .1)]
    Io(PathBuf, String),
    #[error("refusing to overwrite {path}", path = .0.display())]
    Exists(PathBuf),
    #[error(transparent)]
    Core(#[from] welded_core::Error),
}
