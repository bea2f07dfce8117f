use std::io;
use std::path::PathBuf;

use fortress_store::StoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad input: invalid fortress, bad script, engine refusal.
    #[error("{0}")]
    Domain(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Env(String),
    #[error(transparent)]
    Store(#[from] StoreError),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 1 for domain errors, 2 for environment errors.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Io { .. } | CliError::Env(_) => 2,
            CliError::Store(StoreError::Io(_) | StoreError::Corrupt { .. }) => 2,
            CliError::Store(_) => 1,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
