//! JSON frames exchanged with interactive clients.
//!
//! Client to server:
//!
//! ```text
//! {"kind":"hello","participant":"p01","device":"mouse","block":1}
//! {"kind":"keystroke","id":1,"d":"L","t":1712}
//! {"kind":"metrics"}
//! ```
//!
//! Server to client, per keystroke: any `emitted`/`rejected`, `trial-done`
//! and next-trial `layout` frames, then exactly one `state` frame echoing the
//! keystroke id.
//!
//! ```text
//! {"kind":"emitted","symbol":"e","wrong":false}
//! {"kind":"state","id":1,"boxes":{"L":["e","[space]"],"R":[],"U":["t"],"D":[]},"transcribed":"e","depth":0}
//! ```

use h4_core::codec::{Direction, Symbol};
use h4_core::metrics::TrialMetrics;
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Candidate boxes keyed by direction letter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Boxes {
    #[serde(rename = "L")]
    pub left: Vec<Symbol>,
    #[serde(rename = "R")]
    pub right: Vec<Symbol>,
    #[serde(rename = "U")]
    pub up: Vec<Symbol>,
    #[serde(rename = "D")]
    pub down: Vec<Symbol>,
}

impl Boxes {
    pub fn from_partition(parts: [&[Symbol]; 4]) -> Boxes {
        let [l, r, u, d] = parts.map(<[Symbol]>::to_vec);
        Boxes {
            left: l,
            right: r,
            up: u,
            down: d,
        }
    }

    pub fn get(&self, d: Direction) -> &[Symbol] {
        match d {
            Direction::Left => &self.left,
            Direction::Right => &self.right,
            Direction::Up => &self.up,
            Direction::Down => &self.down,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ClientFrame {
    /// Starts (or restarts) a session. Every field is optional; `phrases`
    /// overrides the server's phrase set for this session.
    Hello {
        #[serde(default)]
        participant: Option<String>,
        #[serde(default)]
        device: Option<String>,
        #[serde(default)]
        block: Option<u32>,
        #[serde(default)]
        phrases: Option<Vec<String>>,
        #[serde(default)]
        count: Option<usize>,
        #[serde(default)]
        seed: Option<u64>,
    },
    Keystroke {
        id: u64,
        d: Direction,
        t: u64,
    },
    Metrics {},
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ServerFrame {
    Layout {
        participant: String,
        device: String,
        block: u32,
        /// 0-based trial index within the session.
        trial: usize,
        trials: usize,
        presented: String,
        boxes: Boxes,
        depth: usize,
    },
    State {
        id: u64,
        boxes: Boxes,
        transcribed: String,
        depth: usize,
    },
    Emitted {
        symbol: Symbol,
        wrong: bool,
    },
    Rejected {
        d: Direction,
    },
    TrialDone {
        trial: usize,
        presented: String,
        transcribed: String,
        metrics: TrialMetrics,
    },
    SessionDone {
        trials: usize,
    },
    Metrics {
        trials: Vec<TrialMetrics>,
    },
    Error {
        #[serde(skip_serializing_if = "Option::is_none")]
        id: Option<u64>,
        message: String,
    },
}

impl ServerFrame {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("frames always serialize")
    }
}

/// Fields that depend on wall-clock timing rather than on the key sequence.
pub const TIMING_FIELDS: [&str; 3] = ["t", "wpm", "duration_s"];

/// Removes timing fields at any depth so transcripts recorded at different
/// speeds compare equal.
pub fn canonicalize(frame: &Value) -> Value {
    match frame {
        Value::Object(map) => Value::Object(
            map.iter()
                .filter(|(k, _)| !TIMING_FIELDS.contains(&k.as_str()))
                .map(|(k, v)| (k.clone(), canonicalize(v)))
                .collect(),
        ),
        Value::Array(items) => Value::Array(items.iter().map(canonicalize).collect()),
        other => other.clone(),
    }
}
