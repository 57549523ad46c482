//! JSON Lines keystroke logs.
//!
//! ```text
//! {"presented":"the cat","table":"<sha256 of the code table>","count_enter":false}
//! {"d":"U","t":0,"o":"descend"}
//! {"d":"L","t":412,"o":"emit:t"}
//! {"d":"R","t":800,"o":"rejected"}
//! ```
//!
//! The first line is the trial header; every following line is one
//! keystroke. Outcomes are `descend`, `rejected` or `emit:<token>` where the
//! token is a single character or `[space]`, `[bksp]`, `[enter]`.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{EngineError, KeystrokeEvent, Outcome, Trial};
use crate::codec::{Direction, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogHeader {
    pub presented: String,
    pub table: String,
    pub count_enter: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogLine {
    pub d: Direction,
    pub t: u64,
    pub o: String,
}

impl From<&KeystrokeEvent> for LogLine {
    fn from(k: &KeystrokeEvent) -> Self {
        let o = match k.outcome {
            Outcome::Descend => "descend".to_string(),
            Outcome::Rejected => "rejected".to_string(),
            Outcome::Emit(s) => format!("emit:{}", s.token()),
        };
        LogLine {
            d: k.direction,
            t: k.t_ms,
            o,
        }
    }
}

impl LogLine {
    pub fn to_event(&self) -> Result<KeystrokeEvent, String> {
        let outcome = match self.o.as_str() {
            "descend" => Outcome::Descend,
            "rejected" => Outcome::Rejected,
            other => {
                let token = other
                    .strip_prefix("emit:")
                    .ok_or_else(|| format!("unknown outcome {other:?}"))?;
                Outcome::Emit(token.parse::<Symbol>().map_err(|e| e.to_string())?)
            }
        };
        Ok(KeystrokeEvent {
            direction: self.d,
            t_ms: self.t,
            outcome,
        })
    }
}

pub fn write_log<W: Write>(trial: &Trial, count_enter: bool, mut out: W) -> Result<(), EngineError> {
    let header = LogHeader {
        presented: trial.presented.clone(),
        table: trial.table_hash.clone(),
        count_enter,
    };
    let to_io = |e: serde_json::Error| EngineError::Io(e.to_string());
    writeln!(out, "{}", serde_json::to_string(&header).map_err(to_io)?)?;
    for k in &trial.keystrokes {
        writeln!(out, "{}", serde_json::to_string(&LogLine::from(k)).map_err(to_io)?)?;
    }
    Ok(())
}

pub fn read_log<R: BufRead>(input: R) -> Result<(LogHeader, Vec<KeystrokeEvent>), EngineError> {
    let mut lines = input.lines().enumerate();
    let header = loop {
        match lines.next() {
            None => {
                return Err(EngineError::BadLog {
                    line: 0,
                    reason: "missing header".into(),
                })
            }
            Some((_, line)) if line.as_ref().is_ok_and(|l| l.trim().is_empty()) => continue,
            Some((i, line)) => {
                break serde_json::from_str::<LogHeader>(&line?).map_err(|e| EngineError::BadLog {
                    line: i + 1,
                    reason: e.to_string(),
                })?
            }
        }
    };
    let mut events = Vec::new();
    for (i, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let bad = |reason: String| EngineError::BadLog { line: i + 1, reason };
        let parsed: LogLine = serde_json::from_str(&line).map_err(|e| bad(e.to_string()))?;
        events.push(parsed.to_event().map_err(bad)?);
    }
    Ok((header, events))
}
