//! Append-only session storage.
//!
//! `session.jsonl` holds, per trial, a header line, one line per keystroke
//! and a metrics line:
//!
//! ```text
//! {"kind":"trial","participant":"p01","device":"mouse","block":1,"phrase":0,"presented":"...","table":"...","count_enter":false,"keystrokes":57}
//! {"d":"L","t":0,"o":"descend"}
//! ...
//! {"kind":"metrics","wpm":3.1,"kspc_empirical":2.4,...}
//! ```
//!
//! `metrics.csv` carries the same metrics, one row per trial, in the column
//! order of [`CSV_COLUMNS`].

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::engine::{replay, KeystrokeEvent, Keyboard, LogLine, Trial};
use crate::metrics::TrialMetrics;

pub const SESSION_FILE: &str = "session.jsonl";
pub const METRICS_FILE: &str = "metrics.csv";

pub const CSV_COLUMNS: [&str; 14] = [
    "participant",
    "device",
    "block",
    "phrase",
    "presented",
    "transcribed",
    "keystrokes",
    "chars",
    "corrected",
    "duration_s",
    "wpm",
    "kspc",
    "efficiency",
    "error_rate",
];

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TrialKey {
    pub participant: String,
    pub device: String,
    pub block: u32,
    pub phrase: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum Record {
    Trial {
        #[serde(flatten)]
        key: TrialKey,
        presented: String,
        transcribed: String,
        table: String,
        count_enter: bool,
        keystrokes: usize,
    },
    Metrics(TrialMetrics),
}

/// A trial as read back from `session.jsonl`.
#[derive(Debug, Clone, PartialEq)]
pub struct StoredTrial {
    pub key: TrialKey,
    pub presented: String,
    pub transcribed: String,
    pub table_hash: String,
    pub count_enter: bool,
    pub keystrokes: Vec<KeystrokeEvent>,
    pub metrics: TrialMetrics,
}

impl StoredTrial {
    /// Replays the log and recomputes metrics; both must match what was stored.
    pub fn verify(&self, keyboard: &Arc<Keyboard>) -> Result<Trial, ExperimentError> {
        if keyboard.table_hash() != self.table_hash {
            return Err(ExperimentError::Replay {
                key: self.key.clone(),
                reason: format!(
                    "recorded with table {}, given {}",
                    self.table_hash,
                    keyboard.table_hash()
                ),
            });
        }
        let keys: Vec<_> = self.keystrokes.iter().map(|k| (k.direction, k.t_ms)).collect();
        let mismatch = |reason: String| ExperimentError::Replay {
            key: self.key.clone(),
            reason,
        };
        let trial = replay(Arc::clone(keyboard), &self.presented, &keys)
            .map_err(|e| mismatch(e.to_string()))?;
        if trial.keystrokes != self.keystrokes {
            return Err(mismatch("replayed outcomes differ from the log".into()));
        }
        if trial.transcribed != self.transcribed {
            return Err(mismatch(format!(
                "replay transcribed {:?}, stored {:?}",
                trial.transcribed, self.transcribed
            )));
        }
        let metrics = TrialMetrics::compute(&trial, keyboard.table(), self.count_enter)
            .map_err(|e| mismatch(e.to_string()))?;
        if metrics != self.metrics {
            return Err(mismatch(format!(
                "recomputed metrics {metrics:?} differ from stored {:?}",
                self.metrics
            )));
        }
        Ok(trial)
    }
}

/// Single-writer handle on a session directory.
#[derive(Debug)]
pub struct SessionStore {
    dir: PathBuf,
    session: BufWriter<File>,
    csv: csv::Writer<File>,
}

impl SessionStore {
    pub fn open(dir: impl AsRef<Path>) -> Result<Self, ExperimentError> {
        let dir = dir.as_ref().to_path_buf();
        std::fs::create_dir_all(&dir)?;
        let session = OpenOptions::new()
            .create(true)
            .append(true)
            .open(dir.join(SESSION_FILE))?;
        let csv_path = dir.join(METRICS_FILE);
        let fresh = std::fs::metadata(&csv_path).map_or(true, |m| m.len() == 0);
        let csv_file = OpenOptions::new().create(true).append(true).open(&csv_path)?;
        let mut csv = csv::WriterBuilder::new().has_headers(false).from_writer(csv_file);
        if fresh {
            csv.write_record(CSV_COLUMNS)?;
            csv.flush()?;
        }
        Ok(SessionStore {
            dir,
            session: BufWriter::new(session),
            csv,
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn append(
        &mut self,
        key: &TrialKey,
        trial: &Trial,
        count_enter: bool,
        metrics: &TrialMetrics,
    ) -> Result<(), ExperimentError> {
        let header = Record::Trial {
            key: key.clone(),
            presented: trial.presented.clone(),
            transcribed: trial.transcribed.clone(),
            table: trial.table_hash.clone(),
            count_enter,
            keystrokes: trial.keystrokes.len(),
        };
        writeln!(self.session, "{}", serde_json::to_string(&header)?)?;
        for k in &trial.keystrokes {
            writeln!(self.session, "{}", serde_json::to_string(&LogLine::from(k))?)?;
        }
        writeln!(
            self.session,
            "{}",
            serde_json::to_string(&Record::Metrics(metrics.clone()))?
        )?;
        self.session.flush()?;

        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        self.csv.write_record([
            key.participant.clone(),
            key.device.clone(),
            key.block.to_string(),
            key.phrase.to_string(),
            trial.presented.clone(),
            trial.transcribed.clone(),
            metrics.keystrokes.to_string(),
            metrics.chars.to_string(),
            metrics.corrected_count.to_string(),
            opt(metrics.duration_s),
            opt(metrics.wpm),
            opt(metrics.kspc_empirical),
            opt(metrics.efficiency),
            metrics.uncorrected_error_rate.to_string(),
        ])?;
        self.csv.flush()?;
        Ok(())
    }

    /// Reads every trial stored under `dir`.
    pub fn load(dir: impl AsRef<Path>) -> Result<Vec<StoredTrial>, ExperimentError> {
        let file = File::open(dir.as_ref().join(SESSION_FILE))?;
        read_session(BufReader::new(file))
    }
}

pub fn read_session<R: BufRead>(input: R) -> Result<Vec<StoredTrial>, ExperimentError> {
    let mut out = Vec::new();
    let mut lines = input.lines().enumerate().filter(|(_, l)| {
        l.as_ref().map_or(true, |l| !l.trim().is_empty())
    });
    let bad = |line: usize, reason: String| ExperimentError::Store { line: line + 1, reason };
    while let Some((i, line)) = lines.next() {
        let record: Record = serde_json::from_str(&line?).map_err(|e| bad(i, e.to_string()))?;
        let Record::Trial {
            key,
            presented,
            transcribed,
            table,
            count_enter,
            keystrokes: n,
        } = record
        else {
            return Err(bad(i, "expected a trial header".into()));
        };
        let mut keystrokes = Vec::with_capacity(n);
        for _ in 0..n {
            let (j, line) = lines
                .next()
                .ok_or_else(|| bad(i, format!("log truncated before {n} keystrokes")))?;
            let parsed: LogLine = serde_json::from_str(&line?).map_err(|e| bad(j, e.to_string()))?;
            keystrokes.push(parsed.to_event().map_err(|e| bad(j, e))?);
        }
        let (j, line) = lines
            .next()
            .ok_or_else(|| bad(i, "missing metrics line".into()))?;
        let Record::Metrics(metrics) =
            serde_json::from_str(&line?).map_err(|e| bad(j, e.to_string()))?
        else {
            return Err(bad(j, "expected a metrics line".into()));
        };
        out.push(StoredTrial {
            key,
            presented,
            transcribed,
            table_hash: table,
            count_enter,
            keystrokes,
            metrics,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{CodeTable, Direction};

    fn keyboard() -> Arc<Keyboard> {
        Keyboard::new(CodeTable::parse(include_str!("../../data/partial.tsv")).unwrap())
    }

    #[test]
    fn append_and_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let kb = keyboard();
        let keys = [
            (Direction::Left, 0),
            (Direction::Right, 310),
            (Direction::Up, 640),
            (Direction::Left, 999),
        ];
        let trial = replay(kb.clone(), "et", &keys).unwrap();
        let metrics = TrialMetrics::compute(&trial, kb.table(), false).unwrap();
        let key = TrialKey {
            participant: "p01".into(),
            device: "mouse".into(),
            block: 1,
            phrase: 0,
        };
        {
            let mut store = SessionStore::open(dir.path()).unwrap();
            store.append(&key, &trial, false, &metrics).unwrap();
        }
        {
            // reopening appends without repeating the CSV header
            let mut store = SessionStore::open(dir.path()).unwrap();
            let key2 = TrialKey { phrase: 1, ..key.clone() };
            store.append(&key2, &trial, false, &metrics).unwrap();
        }
        let loaded = SessionStore::load(dir.path()).unwrap();
        assert_eq!(loaded.len(), 2);
        assert_eq!(loaded[0].key, key);
        assert_eq!(loaded[0].metrics, metrics);
        assert_eq!(loaded[0].verify(&kb).unwrap(), trial);

        let csv = std::fs::read_to_string(dir.path().join(METRICS_FILE)).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], CSV_COLUMNS.join(","));
        assert!(lines[1].starts_with("p01,mouse,1,0,et,et,4,2,0,0.999,"));
    }

    #[test]
    fn tampered_metrics_fail_verification() {
        let kb = keyboard();
        let trial = replay(kb.clone(), "e", &[(Direction::Left, 0), (Direction::Right, 5)]).unwrap();
        let mut metrics = TrialMetrics::compute(&trial, kb.table(), false).unwrap();
        metrics.uncorrected_error_rate = 1.0;
        let mut buf = Vec::new();
        {
            let dir = tempfile::tempdir().unwrap();
            let mut store = SessionStore::open(dir.path()).unwrap();
            let key = TrialKey {
                participant: "p".into(),
                device: "d".into(),
                block: 1,
                phrase: 0,
            };
            store.append(&key, &trial, false, &metrics).unwrap();
            drop(store);
            buf.extend(std::fs::read(dir.path().join(SESSION_FILE)).unwrap());
        }
        let loaded = read_session(buf.as_slice()).unwrap();
        assert!(matches!(loaded[0].verify(&kb), Err(ExperimentError::Replay { .. })));
    }

    #[test]
    fn truncated_session_is_an_error() {
        let text = "{\"kind\":\"trial\",\"participant\":\"p\",\"device\":\"d\",\"block\":1,\"phrase\":0,\"presented\":\"e\",\"transcribed\":\"e\",\"table\":\"x\",\"count_enter\":false,\"keystrokes\":2}\n{\"d\":\"L\",\"t\":0,\"o\":\"descend\"}\n";
        assert!(matches!(
            read_session(text.as_bytes()),
            Err(ExperimentError::Store { .. })
        ));
    }
}
