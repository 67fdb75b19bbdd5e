use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AppError {
    #[error(transparent)]
    Core(#[from] mtable_core::Error),

    #[error("{0}")]
    Usage(String),

    #[error("io error: {0}")]
    Io(#[from] io::Error),

    #[error("cache {path}: {reason}")]
    Cache { path: String, reason: String },
}
