//! The four-key selection loop.
//!
//! An [`Engine`] drives one [`Trial`]: each directional press either descends
//! into the code tree, emits the symbol at a leaf (and returns to the root),
//! or is rejected because no code continues that way. Every press is logged
//! with its timestamp so the trial can be rebuilt with [`replay`].

mod log;
mod trial;

pub use log::{read_log, write_log, LogHeader, LogLine};
pub use trial::{KeystrokeEvent, Outcome, Trial};

use std::sync::Arc;

use thiserror::Error;

use crate::codec::{text_symbols, CodeTable, CodeTree, Direction, NodeId, Symbol};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("presented phrase is empty")]
    EmptyPhrase,
    #[error("presented phrase contains {symbol} at position {position}, which the code table cannot type")]
    Unencodable { symbol: Symbol, position: usize },
    #[error("trial already finished")]
    Finished,
    #[error("keystroke at {t_ms} ms precedes previous keystroke at {previous_ms} ms")]
    OutOfOrder { t_ms: u64, previous_ms: u64 },
    #[error("malformed log line {line}: {reason}")]
    BadLog { line: usize, reason: String },
    #[error("log was recorded with table {found}, expected {expected}")]
    TableMismatch { expected: String, found: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for EngineError {
    fn from(e: std::io::Error) -> Self {
        EngineError::Io(e.to_string())
    }
}

/// A code table together with its tree, shared by every trial typed on it.
#[derive(Debug, Clone)]
pub struct Keyboard {
    table: CodeTable,
    tree: CodeTree,
    hash: String,
}

impl Keyboard {
    pub fn new(table: CodeTable) -> Arc<Keyboard> {
        let tree = table.tree();
        let hash = table.hash();
        Arc::new(Keyboard { table, tree, hash })
    }

    pub fn table(&self) -> &CodeTable {
        &self.table
    }

    pub fn tree(&self) -> &CodeTree {
        &self.tree
    }

    pub fn table_hash(&self) -> &str {
        &self.hash
    }

    /// Checks that every character of `text` has a code.
    pub fn check_encodable(&self, text: &str) -> Result<(), EngineError> {
        for (position, symbol) in text_symbols(text).into_iter().enumerate() {
            if !self.table.contains(symbol) {
                return Err(EngineError::Unencodable { symbol, position });
            }
        }
        Ok(())
    }
}

/// Result of a single press.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Press {
    pub outcome: Outcome,
    /// The emitted symbol was not the one the presented phrase called for.
    pub wrong: bool,
}

#[derive(Debug, Clone)]
pub struct Engine {
    keyboard: Arc<Keyboard>,
    cursor: NodeId,
    trial: Trial,
}

impl Engine {
    pub fn new_trial(keyboard: Arc<Keyboard>, presented: &str) -> Result<Engine, EngineError> {
        if presented.is_empty() {
            return Err(EngineError::EmptyPhrase);
        }
        keyboard.check_encodable(presented)?;
        let cursor = keyboard.tree.root();
        let trial = Trial::new(presented, keyboard.hash.clone());
        Ok(Engine {
            keyboard,
            cursor,
            trial,
        })
    }

    pub fn keyboard(&self) -> &Arc<Keyboard> {
        &self.keyboard
    }

    pub fn trial(&self) -> &Trial {
        &self.trial
    }

    pub fn into_trial(self) -> Trial {
        self.trial
    }

    pub fn cursor(&self) -> NodeId {
        self.cursor
    }

    /// Number of keys pressed since the last emission.
    pub fn depth(&self) -> usize {
        self.keyboard.tree.depth(self.cursor)
    }

    /// The candidate boxes, indexed by [`Direction::index`].
    pub fn boxes(&self) -> [&[Symbol]; 4] {
        self.keyboard.tree.partition(self.cursor)
    }

    pub fn is_finished(&self) -> bool {
        self.trial.is_finished()
    }

    pub fn press(&mut self, direction: Direction, t_ms: u64) -> Result<Press, EngineError> {
        if self.trial.is_finished() {
            return Err(EngineError::Finished);
        }
        if let Some(previous_ms) = self.trial.keystrokes.last().map(|k| k.t_ms) {
            if t_ms < previous_ms {
                return Err(EngineError::OutOfOrder { t_ms, previous_ms });
            }
        }
        if self.trial.started_ms.is_none() {
            self.trial.started_ms = Some(t_ms);
        }
        let keyboard = Arc::clone(&self.keyboard);
        let tree = &keyboard.tree;
        let press = match tree.child(self.cursor, direction) {
            None => Press {
                outcome: Outcome::Rejected,
                wrong: false,
            },
            Some(next) => match tree.leaf_symbol(next) {
                None => {
                    self.cursor = next;
                    Press {
                        outcome: Outcome::Descend,
                        wrong: false,
                    }
                }
                Some(symbol) => {
                    let wrong = self.target() != symbol;
                    self.cursor = tree.root();
                    self.apply(symbol, t_ms);
                    Press {
                        outcome: Outcome::Emit(symbol),
                        wrong,
                    }
                }
            },
        };
        self.trial.keystrokes.push(KeystrokeEvent {
            direction,
            t_ms,
            outcome: press.outcome,
        });
        Ok(press)
    }

    fn apply(&mut self, symbol: Symbol, t_ms: u64) {
        let trial = &mut self.trial;
        if symbol == Symbol::ENTER {
            trial.finished_ms = Some(t_ms);
            trial.enter_keys = self.keyboard.table.code(symbol).map_or(0, |c| c.len());
            return;
        }
        trial.last_emit_ms = Some(t_ms);
        if symbol == Symbol::BACKSPACE {
            if trial.transcribed.pop().is_some() {
                trial.corrected_count += 1;
            }
        } else if let Some(c) = symbol.as_text_char() {
            trial.transcribed.push(c);
        }
    }

    /// The symbol a correct typist emits next: the next presented character,
    /// [`Symbol::BACKSPACE`] while the transcription has diverged, or
    /// [`Symbol::ENTER`] once it matches.
    pub fn target(&self) -> Symbol {
        target_symbol(&self.trial.presented, &self.trial.transcribed)
    }

    /// Next key on the shortest correct path, or `None` once the
    /// transcription matches the presented phrase.
    ///
    /// If the cursor has already left the target's subtree, the shortest way
    /// back is to finish the shallowest non-Enter symbol below the cursor.
    pub fn expected_next_key(&self) -> Option<Direction> {
        let tree = &self.keyboard.tree;
        if self.trial.transcribed == self.trial.presented && self.depth() == 0 {
            return None;
        }
        let target = self.target();
        let here = tree.path(self.cursor);
        if let Some(code) = self.keyboard.table.code(target) {
            if code.keys().starts_with(here) && code.len() > here.len() {
                return Some(code.keys()[here.len()]);
            }
        }
        shallowest_exit(tree, self.cursor)
    }
}

fn target_symbol(presented: &str, transcribed: &str) -> Symbol {
    if transcribed == presented {
        return Symbol::ENTER;
    }
    if let Some(rest) = presented.strip_prefix(transcribed) {
        let next = rest.chars().next().expect("rest is non-empty");
        return Symbol::from_char(next);
    }
    Symbol::BACKSPACE
}

fn shallowest_exit(tree: &CodeTree, from: NodeId) -> Option<Direction> {
    let mut frontier: Vec<(NodeId, Direction)> = Direction::ALL
        .iter()
        .filter_map(|&d| tree.child(from, d).map(|c| (c, d)))
        .collect();
    let mut fallback = None;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &(node, first) in &frontier {
            match tree.leaf_symbol(node) {
                Some(Symbol::ENTER) => {
                    fallback.get_or_insert(first);
                }
                Some(_) => return Some(first),
                None => next.extend(
                    Direction::ALL
                        .iter()
                        .filter_map(|&d| tree.child(node, d).map(|c| (c, first))),
                ),
            }
        }
        frontier = next;
    }
    fallback
}

/// Rebuilds a trial by pressing `keys` on a fresh engine.
pub fn replay(
    keyboard: Arc<Keyboard>,
    presented: &str,
    keys: &[(Direction, u64)],
) -> Result<Trial, EngineError> {
    if let Some(w) = keys.windows(2).find(|w| w[1].1 < w[0].1) {
        return Err(EngineError::OutOfOrder {
            t_ms: w[1].1,
            previous_ms: w[0].1,
        });
    }
    let mut engine = Engine::new_trial(keyboard, presented)?;
    for &(d, t) in keys {
        engine.press(d, t)?;
    }
    Ok(engine.into_trial())
}
