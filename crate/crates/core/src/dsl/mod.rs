//! The `.fort` fortress definition format.
//!
//! ```text
//! FORTRESS "Zelda A"
//! AUTHOR "dork"
//! SEED 42
//! NOTES "Link finds a seed"
//!
//! ENTITY L "Link"
//!   NODE 0 idle
//!   NODE 1 move
//!   EDGE 0-1 step 2
//!   EDGE 1-0 none
//! END
//!
//! MAP
//! ################
//! #..L...........#
//! ...
//! END
//! ```
//!
//! Line oriented. Lines starting with `#` are comments except inside `MAP`.
//! Strings are double quoted with `\"` and `\\` as the only escapes.
//! `SEED` is a u64 or `__RANDOM__`.

mod parse;
mod serialize;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::Fortress;

pub use serialize::serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ErrorCode {
    UnknownAction,
    UnknownCondition,
    DuplicateActionSignature,
    UndefinedTargetCharacter,
    BadNodeIndex,
    DuplicateDirectedEdge,
    MapDimensionMismatch,
    UnknownMapCharacter,
    BadBorder,
    BadCount,
    ReservedCharacter,
    TooManyInitialEntities,
    SyntaxError,
    DuplicateEntityCharacter,
    MissingSection,
}

impl ErrorCode {
    pub const ALL: [ErrorCode; 15] = [
        ErrorCode::UnknownAction,
        ErrorCode::UnknownCondition,
        ErrorCode::DuplicateActionSignature,
        ErrorCode::UndefinedTargetCharacter,
        ErrorCode::BadNodeIndex,
        ErrorCode::DuplicateDirectedEdge,
        ErrorCode::MapDimensionMismatch,
        ErrorCode::UnknownMapCharacter,
        ErrorCode::BadBorder,
        ErrorCode::BadCount,
        ErrorCode::ReservedCharacter,
        ErrorCode::TooManyInitialEntities,
        ErrorCode::SyntaxError,
        ErrorCode::DuplicateEntityCharacter,
        ErrorCode::MissingSection,
    ];

    /// `E001` through `E015`.
    pub fn code(self) -> &'static str {
        match self {
            ErrorCode::UnknownAction => "E001",
            ErrorCode::UnknownCondition => "E002",
            ErrorCode::DuplicateActionSignature => "E003",
            ErrorCode::UndefinedTargetCharacter => "E004",
            ErrorCode::BadNodeIndex => "E005",
            ErrorCode::DuplicateDirectedEdge => "E006",
            ErrorCode::MapDimensionMismatch => "E007",
            ErrorCode::UnknownMapCharacter => "E008",
            ErrorCode::BadBorder => "E009",
            ErrorCode::BadCount => "E010",
            ErrorCode::ReservedCharacter => "E011",
            ErrorCode::TooManyInitialEntities => "E012",
            ErrorCode::SyntaxError => "E013",
            ErrorCode::DuplicateEntityCharacter => "E014",
            ErrorCode::MissingSection => "E015",
        }
    }

    pub fn from_code(code: &str) -> Option<ErrorCode> {
        ErrorCode::ALL.into_iter().find(|c| c.code() == code)
    }
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// A diagnostic pointing at a 1-based source line.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CompileError {
    pub code: ErrorCode,
    pub line: usize,
    pub message: String,
}

impl CompileError {
    pub(crate) fn new(code: ErrorCode, line: usize, message: impl Into<String>) -> Self {
        CompileError {
            code,
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for CompileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} {}", self.line, self.code, self.message)
    }
}

impl std::error::Error for CompileError {}

/// Parses and validates a definition, returning every problem found.
pub fn parse(text: &str) -> Result<Fortress, Vec<CompileError>> {
    parse::parse(text)
}

/// All diagnostics for `text`; empty means the text is ready to save.
pub fn validate_text(text: &str) -> Vec<CompileError> {
    match parse(text) {
        Ok(_) => Vec::new(),
        Err(errors) => errors,
    }
}
