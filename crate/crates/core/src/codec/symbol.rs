use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::CodecError;

/// One of the four selection keys.
///
/// The declaration order is the canonical order (`L < R < U < D`) used for
/// tie-breaking, child enumeration and serialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Left,
    Right,
    Up,
    Down,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::Left,
        Direction::Right,
        Direction::Up,
        Direction::Down,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Direction> {
        Self::ALL.get(i).copied()
    }

    pub fn letter(self) -> char {
        match self {
            Direction::Left => 'L',
            Direction::Right => 'R',
            Direction::Up => 'U',
            Direction::Down => 'D',
        }
    }

    pub fn from_letter(c: char) -> Option<Direction> {
        match c {
            'L' => Some(Direction::Left),
            'R' => Some(Direction::Right),
            'U' => Some(Direction::Up),
            'D' => Some(Direction::Down),
            _ => None,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl Serialize for Direction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut buf = [0u8; 4];
        serializer.serialize_str(self.letter().encode_utf8(&mut buf))
    }
}

impl<'de> Deserialize<'de> for Direction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        let mut chars = s.chars();
        match (chars.next().and_then(Direction::from_letter), chars.next()) {
            (Some(d), None) => Ok(d),
            _ => Err(serde::de::Error::custom(format!(
                "invalid direction {s:?}, expected one of L, R, U, D"
            ))),
        }
    }
}

/// Commands that can be emitted alongside ordinary characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Command {
    Space,
    Backspace,
    Enter,
}

impl Command {
    pub fn token(self) -> &'static str {
        match self {
            Command::Space => "[space]",
            Command::Backspace => "[bksp]",
            Command::Enter => "[enter]",
        }
    }
}

/// An emittable unit: a printable character or a command.
///
/// A literal space is always represented as [`Command::Space`], so
/// `Symbol::Char(' ')` never exists; use [`Symbol::from_char`] to build
/// symbols from text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Char(char),
    Command(Command),
}

impl Symbol {
    pub const SPACE: Symbol = Symbol::Command(Command::Space);
    pub const BACKSPACE: Symbol = Symbol::Command(Command::Backspace);
    pub const ENTER: Symbol = Symbol::Command(Command::Enter);

    pub fn from_char(c: char) -> Symbol {
        if c == ' ' {
            Symbol::SPACE
        } else {
            Symbol::Char(c)
        }
    }

    /// The character this symbol contributes to transcribed text, if any.
    pub fn as_text_char(self) -> Option<char> {
        match self {
            Symbol::Char(c) => Some(c),
            Symbol::Command(Command::Space) => Some(' '),
            Symbol::Command(_) => None,
        }
    }

    pub fn token(&self) -> String {
        match self {
            Symbol::Char(c) => c.to_string(),
            Symbol::Command(cmd) => cmd.token().to_string(),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Char(c) => write!(f, "{c}"),
            Symbol::Command(cmd) => f.write_str(cmd.token()),
        }
    }
}

impl FromStr for Symbol {
    type Err = CodecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        if let (Some(c), None) = (chars.next(), chars.next()) {
            return Ok(Symbol::from_char(c));
        }
        if s.len() > 2 && s.starts_with('[') && s.ends_with(']') {
            let name = s[1..s.len() - 1].to_ascii_lowercase();
            return match name.as_str() {
                "space" => Ok(Symbol::SPACE),
                "bksp" | "backspace" => Ok(Symbol::BACKSPACE),
                "enter" => Ok(Symbol::ENTER),
                _ => Err(CodecError::UnknownToken(s.to_string())),
            };
        }
        Err(CodecError::UnknownToken(s.to_string()))
    }
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.token())
    }
}

impl<'de> Deserialize<'de> for Symbol {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Converts text into the symbol sequence that would type it.
pub fn text_symbols(text: &str) -> Vec<Symbol> {
    text.chars().map(Symbol::from_char).collect()
}
