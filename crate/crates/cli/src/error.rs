use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, configuration or request.
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] primechaos::Error),

    /// A library error raised while reading a named input.
    #[error("{}: {source}", path.display())]
    Input {
        path: PathBuf,
        source: primechaos::Error,
    },

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// 1 for user errors, 2 for numeric or integrity failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) | CliError::Input { source: e, .. } if e.is_numeric() => 2,
            _ => 1,
        }
    }
}
