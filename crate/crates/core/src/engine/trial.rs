use crate::codec::{Direction, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Descend,
    Emit(Symbol),
    Rejected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KeystrokeEvent {
    pub direction: Direction,
    pub t_ms: u64,
    pub outcome: Outcome,
}

/// One presented phrase and everything typed against it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trial {
    pub presented: String,
    pub transcribed: String,
    pub keystrokes: Vec<KeystrokeEvent>,
    /// Backspace emissions that removed a character.
    pub corrected_count: usize,
    pub table_hash: String,
    /// Time of the first keystroke.
    pub started_ms: Option<u64>,
    /// Time of the keystroke completing the last non-Enter emission.
    pub last_emit_ms: Option<u64>,
    /// Time of the Enter emission that closed the trial.
    pub finished_ms: Option<u64>,
    /// Code length of the Enter emission, 0 while unfinished.
    pub enter_keys: usize,
}

impl Trial {
    pub(crate) fn new(presented: &str, table_hash: String) -> Trial {
        Trial {
            presented: presented.to_string(),
            transcribed: String::new(),
            keystrokes: Vec::new(),
            corrected_count: 0,
            table_hash,
            started_ms: None,
            last_emit_ms: None,
            finished_ms: None,
            enter_keys: 0,
        }
    }

    pub fn is_finished(&self) -> bool {
        self.finished_ms.is_some()
    }

    pub fn rejected_count(&self) -> usize {
        self.keystrokes
            .iter()
            .filter(|k| k.outcome == Outcome::Rejected)
            .count()
    }

    pub fn emissions(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.keystrokes.iter().filter_map(|k| match k.outcome {
            Outcome::Emit(s) => Some(s),
            _ => None,
        })
    }

    /// Descending presses after the last emission.
    pub fn partial_keys(&self) -> usize {
        self.keystrokes
            .iter()
            .rev()
            .take_while(|k| !matches!(k.outcome, Outcome::Emit(_)))
            .filter(|k| k.outcome == Outcome::Descend)
            .count()
    }

    /// Keystrokes charged to the transcription; the closing Enter code is
    /// only charged when `count_enter` is set.
    pub fn counted_keystrokes(&self, count_enter: bool) -> usize {
        if count_enter {
            self.keystrokes.len()
        } else {
            self.keystrokes.len() - self.enter_keys
        }
    }

    /// Entry time in seconds, first keystroke to last non-Enter emission.
    pub fn duration_s(&self) -> Option<f64> {
        match (self.started_ms, self.last_emit_ms) {
            (Some(a), Some(b)) => Some((b - a) as f64 / 1000.0),
            _ => None,
        }
    }

    /// (direction, timestamp) pairs, the input [`super::replay`] takes.
    pub fn key_log(&self) -> Vec<(Direction, u64)> {
        self.keystrokes.iter().map(|k| (k.direction, k.t_ms)).collect()
    }
}
