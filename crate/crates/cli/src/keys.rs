//! Keyboard control schemes.

use clap::ValueEnum;
use fortress_core::PlayerInput;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Scheme {
    #[default]
    Arrows,
    Wasd,
    Vi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Key {
    Up,
    Down,
    Left,
    Right,
    Char(char),
    Esc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Input(PlayerInput),
    Pause,
    Reset,
    Quit,
}

/// Movement and skip keys follow the scheme; P, R and Q/Esc work everywhere.
pub fn map_key(scheme: Scheme, key: Key) -> Option<Command> {
    use PlayerInput::*;
    let key = match key {
        Key::Char(c) => Key::Char(c.to_ascii_lowercase()),
        k => k,
    };
    let input = match (scheme, key) {
        (_, Key::Char('p')) => return Some(Command::Pause),
        (_, Key::Char('r')) => return Some(Command::Reset),
        (_, Key::Char('q') | Key::Esc) => return Some(Command::Quit),
        (Scheme::Arrows, Key::Up) => Up,
        (Scheme::Arrows, Key::Down) => Down,
        (Scheme::Arrows, Key::Left) => Left,
        (Scheme::Arrows, Key::Right) => Right,
        (Scheme::Arrows, Key::Char(' ')) => Skip,
        (Scheme::Wasd, Key::Char('w')) => Up,
        (Scheme::Wasd, Key::Char('s')) => Down,
        (Scheme::Wasd, Key::Char('a')) => Left,
        (Scheme::Wasd, Key::Char('d')) => Right,
        (Scheme::Wasd, Key::Char('f')) => Skip,
        (Scheme::Vi, Key::Char('k')) => Up,
        (Scheme::Vi, Key::Char('j')) => Down,
        (Scheme::Vi, Key::Char('h')) => Left,
        (Scheme::Vi, Key::Char('l')) => Right,
        (Scheme::Vi, Key::Char(';')) => Skip,
        _ => return None,
    };
    Some(Command::Input(input))
}

/// A key typed as a word in line mode: `up`, `down`, `left`, `right`,
/// `space`, `esc`, or a single character.
pub fn parse_key_word(word: &str) -> Option<Key> {
    match word.to_ascii_lowercase().as_str() {
        "up" => Some(Key::Up),
        "down" => Some(Key::Down),
        "left" => Some(Key::Left),
        "right" => Some(Key::Right),
        "space" => Some(Key::Char(' ')),
        "esc" => Some(Key::Esc),
        _ => {
            let mut chars = word.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => Some(Key::Char(c)),
                _ => None,
            }
        }
    }
}
