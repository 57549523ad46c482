//! Phrase sets, counterbalanced schedules, session storage and the
//! statistics reported over them.

mod fit;
mod phrases;
mod report;
mod schedule;
mod stats;
mod store;
mod summary;
mod typist;

pub use fit::{fit_learning_curve, FitModel, FitResult};
pub use phrases::{normalize_phrase, PhraseSet, DEFAULT_PHRASES};
pub use report::{report, AnovaLine, FitLine, Projection, Reference, Report, PROJECTED_BLOCKS};
pub use schedule::{latin_square, make_schedule, PlannedTrial, Schedule};
pub use stats::{f_cdf, f_upper_tail, ln_gamma, regularized_incomplete_beta, rm_anova, AnovaResult};
pub use store::{read_session, SessionStore, StoredTrial, TrialKey, CSV_COLUMNS, METRICS_FILE, SESSION_FILE};
pub use summary::{condition_matrix, device_order, summarize, Factor, GroupBy, GroupSummary, Metric, Stat};
pub use typist::{record, simulate, type_phrase, SimulatedTrial, TimingProfile, Typist};

use thiserror::Error;

use crate::codec::CodecError;
use crate::engine::EngineError;
use crate::metrics::MetricsError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExperimentError {
    #[error("phrase set is empty after normalization")]
    EmptyPhraseSet,
    #[error("schedule: {0}")]
    Schedule(String),
    #[error("session store is empty")]
    EmptyStore,
    #[error("anova: {0}")]
    Anova(String),
    #[error("fit: {0}")]
    Fit(String),
    #[error("session line {line}: {reason}")]
    Store { line: usize, reason: String },
    #[error("replay of {key:?} failed: {reason}")]
    Replay { key: TrialKey, reason: String },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for ExperimentError {
    fn from(e: std::io::Error) -> Self {
        ExperimentError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for ExperimentError {
    fn from(e: serde_json::Error) -> Self {
        ExperimentError::Io(e.to_string())
    }
}

impl From<csv::Error> for ExperimentError {
    fn from(e: csv::Error) -> Self {
        ExperimentError::Io(e.to_string())
    }
}
