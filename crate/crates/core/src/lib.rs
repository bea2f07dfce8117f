//! Deterministic finite-state-machine agents on a 16x8 ASCII grid, plus the
//! `.fort` text format used to define, validate and share fortresses.

pub mod dsl;
pub mod engine;
pub mod generate;
pub mod input;
pub mod model;
pub mod render;
pub mod rng;

pub use dsl::{parse, serialize, validate_text, CompileError, ErrorCode};
pub use engine::{eval_condition, EngineError, RunOutcome, TickReport, Xray, XrayEntry};
pub use input::{AutoPlayer, InputScript, InputSource, NoInput, PlayerInput, ScriptedInput};
pub use model::*;
pub use render::{render_map, render_map_marked};
pub use rng::SplitMix64;
