//! TOML configuration and the default symbol set.
//!
//! ```toml
//! seed = 2024
//! count_enter = false
//! letters = "my-letters.tsv"   # optional; bundled English table otherwise
//! alphabet = "abcdefghijklmnopqrstuvwxyz"
//!
//! [commands]
//! space = 0.18
//! bksp = 0.02
//! enter = 0.03
//! ```
//!
//! Command shares are fractions of all traffic. Letters are rescaled to the
//! remainder. A share of zero drops that command from the table.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codec::{build_code_table, CodeTable, CodecError, Symbol, SymbolFrequencyTable};

/// Bundled English letter frequencies.
pub const LETTER_FREQUENCIES: &str = include_str!("../data/lewand.tsv");

/// Bundled default configuration.
pub const DEFAULT_CONFIG: &str = include_str!("../data/h4.toml");

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("config: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Codec(#[from] CodecError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CommandShares {
    pub space: f64,
    pub bksp: f64,
    pub enter: f64,
}

impl Default for CommandShares {
    fn default() -> Self {
        CommandShares {
            space: 0.18,
            bksp: 0.02,
            enter: 0.03,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub seed: u64,
    pub count_enter: bool,
    pub letters: Option<PathBuf>,
    pub alphabet: String,
    pub commands: CommandShares,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 2024,
            count_enter: false,
            letters: None,
            alphabet: ('a'..='z').collect(),
            commands: CommandShares::default(),
        }
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Config, ConfigError> {
        Ok(toml::from_str(text)?)
    }

    /// Loads a config file; a relative `letters` path is resolved against the
    /// file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Config, ConfigError> {
        let path = path.as_ref();
        let mut config = Config::parse(&std::fs::read_to_string(path)?)?;
        if let (Some(letters), Some(parent)) = (&config.letters, path.parent()) {
            if letters.is_relative() {
                config.letters = Some(parent.join(letters));
            }
        }
        Ok(config)
    }

    /// Letter frequencies restricted to `alphabet`, in alphabet order.
    pub fn letter_frequencies(&self) -> Result<SymbolFrequencyTable, ConfigError> {
        let source = match &self.letters {
            Some(path) => SymbolFrequencyTable::load(path)?,
            None => SymbolFrequencyTable::parse(LETTER_FREQUENCIES)?,
        };
        let mut entries = Vec::new();
        for c in self.alphabet.chars() {
            let symbol = Symbol::from_char(c);
            let freq = source.frequency(symbol).unwrap_or(0.0);
            if !entries.iter().any(|&(s, _)| s == symbol) {
                entries.push((symbol, freq));
            }
        }
        Ok(SymbolFrequencyTable::new(entries)?)
    }

    /// Letters plus the commands with nonzero shares.
    pub fn frequency_table(&self) -> Result<SymbolFrequencyTable, ConfigError> {
        let c = self.commands;
        let shares: Vec<(Symbol, f64)> = [
            (Symbol::SPACE, c.space),
            (Symbol::BACKSPACE, c.bksp),
            (Symbol::ENTER, c.enter),
        ]
        .into_iter()
        .filter(|&(_, share)| share != 0.0)
        .collect();
        Ok(self.letter_frequencies()?.with_shares(&shares)?)
    }

    pub fn code_table(&self) -> Result<CodeTable, ConfigError> {
        Ok(build_code_table(&self.frequency_table()?)?)
    }
}
