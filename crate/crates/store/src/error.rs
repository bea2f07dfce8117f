use fortress_core::CompileError;
use thiserror::Error;

pub type Result<T, E = StoreError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("fortress text failed validation with {} error(s)", .0.len())]
    ValidationFailed(Vec<CompileError>),
    #[error("parent fortress {0} does not exist")]
    UnknownParent(u64),
    #[error("fortress {0} does not exist")]
    UnknownId(u64),
    #[error("fortress {id} has no entity {ch:?}")]
    UnknownEntity { id: u64, ch: char },
    #[error("search needs a username, a fortress name, or both")]
    NoCriteria,
    #[error("username {0:?} is already taken")]
    UsernameTaken(String),
    #[error("unknown username or wrong password")]
    BadCredentials,
    #[error("missing, unknown or expired session token")]
    Unauthorized,
    #[error("backpack already holds {0} entities")]
    BackpackFull(usize),
    #[error("{0}")]
    InvalidInput(String),
    #[error("journal line {line} is corrupt: {message}")]
    Corrupt { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl StoreError {
    /// Stable machine-readable name used in API error bodies.
    pub fn code(&self) -> &'static str {
        match self {
            StoreError::ValidationFailed(_) => "ValidationFailed",
            StoreError::UnknownParent(_) => "UnknownParent",
            StoreError::UnknownId(_) => "UnknownId",
            StoreError::UnknownEntity { .. } => "UnknownEntity",
            StoreError::NoCriteria => "NoCriteria",
            StoreError::UsernameTaken(_) => "UsernameTaken",
            StoreError::BadCredentials => "BadCredentials",
            StoreError::Unauthorized => "Unauthorized",
            StoreError::BackpackFull(_) => "BackpackFull",
            StoreError::InvalidInput(_) => "InvalidInput",
            StoreError::Corrupt { .. } => "Corrupt",
            StoreError::Io(_) => "Io",
        }
    }
}
