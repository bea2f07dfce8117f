//! Player input and the sources that feed it to a run.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Direction, Fortress};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PlayerInput {
    Up,
    Down,
    Left,
    Right,
    Skip,
}

impl PlayerInput {
    /// Order used when sampling inputs from the RNG (`next % 5`).
    pub const ALL: [PlayerInput; 5] = [
        PlayerInput::Up,
        PlayerInput::Down,
        PlayerInput::Left,
        PlayerInput::Right,
        PlayerInput::Skip,
    ];

    pub fn direction(self) -> Option<Direction> {
        match self {
            PlayerInput::Up => Some(Direction::North),
            PlayerInput::Down => Some(Direction::South),
            PlayerInput::Left => Some(Direction::West),
            PlayerInput::Right => Some(Direction::East),
            PlayerInput::Skip => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PlayerInput::Up => "UP",
            PlayerInput::Down => "DOWN",
            PlayerInput::Left => "LEFT",
            PlayerInput::Right => "RIGHT",
            PlayerInput::Skip => "SKIP",
        }
    }
}

impl fmt::Display for PlayerInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PlayerInput {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PlayerInput::ALL
            .into_iter()
            .find(|i| i.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown input `{s}`"))
    }
}

/// Supplies the inputs for the tick about to run (`fortress.tick + 1`).
pub trait InputSource {
    fn next_inputs(&mut self, fortress: &Fortress) -> BTreeMap<u64, PlayerInput>;
}

/// Every player entity skips.
pub struct NoInput;

impl InputSource for NoInput {
    fn next_inputs(&mut self, _: &Fortress) -> BTreeMap<u64, PlayerInput> {
        BTreeMap::new()
    }
}

/// Uniform random key presses for every player-controlled instance.
pub struct AutoPlayer {
    rng: SplitMix64,
}

impl AutoPlayer {
    pub fn new(seed: u64) -> Self {
        AutoPlayer {
            rng: SplitMix64::new(seed),
        }
    }
}

impl InputSource for AutoPlayer {
    fn next_inputs(&mut self, fortress: &Fortress) -> BTreeMap<u64, PlayerInput> {
        fortress
            .instances
            .iter()
            .filter(|e| e.player_controlled)
            .map(|e| (e.id, PlayerInput::ALL[self.rng.below(5)]))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptEntry {
    pub tick: u64,
    pub id: u64,
    pub input: PlayerInput,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ScriptError {
    pub line: usize,
    pub message: String,
}

/// Scripted inputs, one `T<tick> <id> <UP|DOWN|LEFT|RIGHT|SKIP>` per line.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputScript {
    pub entries: Vec<ScriptEntry>,
    #[serde(skip)]
    lines: Vec<usize>,
}

impl InputScript {
    pub fn new(entries: Vec<ScriptEntry>) -> Self {
        let lines = (1..=entries.len()).collect();
        InputScript { entries, lines }
    }

    /// Parses a script. Blank lines and `#` comments are skipped; ticks must not decrease.
    pub fn parse(text: &str) -> Result<InputScript, ScriptError> {
        let mut script = InputScript::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            let err = |message: String| ScriptError { line, message };
            let fields: Vec<&str> = content.split_whitespace().collect();
            let [tick, id, input] = fields[..] else {
                return Err(err(format!(
                    "expected `T<tick> <id> <input>`, got `{content}`"
                )));
            };
            let tick = tick
                .strip_prefix('T')
                .and_then(|t| t.parse::<u64>().ok())
                .ok_or_else(|| err(format!("bad tick `{tick}`")))?;
            let id = id
                .parse::<u64>()
                .map_err(|_| err(format!("bad instance id `{id}`")))?;
            let input = input.parse::<PlayerInput>().map_err(err)?;
            if script.entries.last().is_some_and(|e| e.tick > tick) {
                return Err(err(format!("tick {tick} goes backwards")));
            }
            script.entries.push(ScriptEntry { tick, id, input });
            script.lines.push(line);
        }
        Ok(script)
    }

    /// Rejects entries naming an id that is not among the fortress's instances.
    pub fn check_ids(&self, fortress: &Fortress) -> Result<(), ScriptError> {
        for (n, e) in self.entries.iter().enumerate() {
            if fortress.instance(e.id).is_none() {
                return Err(ScriptError {
                    line: self.lines.get(n).copied().unwrap_or(n + 1),
                    message: format!("unknown instance id {}", e.id),
                });
            }
        }
        Ok(())
    }

    pub fn render(&self) -> String {
        self.entries
            .iter()
            .map(|e| format!("T{} {} {}\n", e.tick, e.id, e.input))
            .collect()
    }

    pub fn into_source(self) -> ScriptedInput {
        ScriptedInput {
            script: self,
            cursor: 0,
        }
    }
}

/// Replays an [`InputScript`]. Later entries for the same tick and id win.
pub struct ScriptedInput {
    script: InputScript,
    cursor: usize,
}

impl InputSource for ScriptedInput {
    fn next_inputs(&mut self, fortress: &Fortress) -> BTreeMap<u64, PlayerInput> {
        let tick = fortress.tick + 1;
        let entries = &self.script.entries;
        while self.cursor < entries.len() && entries[self.cursor].tick < tick {
            self.cursor += 1;
        }
        let mut out = BTreeMap::new();
        while self.cursor < entries.len() && entries[self.cursor].tick == tick {
            let e = entries[self.cursor];
            out.insert(e.id, e.input);
            self.cursor += 1;
        }
        out
    }
}
