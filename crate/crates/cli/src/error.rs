use std::path::PathBuf;

use thiserror::Error;

/// Exit code for unreadable inputs and unwritable outputs.
pub const EXIT_IO: u8 = 1;
/// Exit code for inputs that parse but break a constraint, or do not parse.
pub const EXIT_VALIDATION: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] veil_core::Error),
    #[error("{0}")]
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Io { .. } => EXIT_IO,
            Self::Core(_) | Self::Validation(_) => EXIT_VALIDATION,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
