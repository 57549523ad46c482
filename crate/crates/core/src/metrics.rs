//! Dependent variables of a text-entry trial.
//!
//! Conventions:
//! * entry speed is `(|T| - 1) / 5` words per minute of entry time, where
//!   entry time runs from the first keystroke to the keystroke completing
//!   the last non-Enter emission;
//! * empirical KSPC and efficiency charge every logged keystroke (descents,
//!   rejected presses and trailing partial codes) except the closing Enter
//!   code unless `count_enter` is set;
//! * efficiency is the minimum number of keystrokes that would have produced
//!   the final transcription over the keystrokes actually spent, as a percent;
//! * uncorrected error rate is `100 · MSD(P, T) / max(|P|, |T|)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codec::{text_symbols, CodeTable, CodecError, SymbolFrequencyTable};
use crate::engine::Trial;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("entry time must be positive, got {0} s")]
    NonPositiveDuration(f64),
    #[error("entry speed needs at least 2 transcribed characters, got {0}")]
    TooShort(usize),
    #[error("transcription is empty")]
    EmptyTranscription,
    #[error(transparent)]
    Codec(#[from] CodecError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KspcMode {
    /// Σ F·K / Σ F.
    Weighted,
    /// Plain mean of code lengths over the symbol set.
    Unweighted,
}

impl std::str::FromStr for KspcMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "weighted" => Ok(KspcMode::Weighted),
            "unweighted" => Ok(KspcMode::Unweighted),
            _ => Err(format!("unknown KSPC mode {s:?} (weighted|unweighted)")),
        }
    }
}

fn char_len(s: &str) -> usize {
    s.chars().count()
}

pub fn entry_speed_wpm(trial: &Trial) -> Result<f64, MetricsError> {
    let n = char_len(&trial.transcribed);
    if n < 2 {
        return Err(MetricsError::TooShort(n));
    }
    let seconds = trial
        .duration_s()
        .ok_or(MetricsError::NonPositiveDuration(0.0))?;
    wpm(n, seconds)
}

/// `(chars - 1) / 5` words over `seconds`.
pub fn wpm(chars: usize, seconds: f64) -> Result<f64, MetricsError> {
    if chars < 2 {
        return Err(MetricsError::TooShort(chars));
    }
    if seconds <= 0.0 || !seconds.is_finite() {
        return Err(MetricsError::NonPositiveDuration(seconds));
    }
    Ok((chars as f64 - 1.0) / 5.0 * (60.0 / seconds))
}

pub fn kspc_theoretical(
    table: &CodeTable,
    freqs: &SymbolFrequencyTable,
    mode: KspcMode,
) -> Result<f64, MetricsError> {
    match mode {
        KspcMode::Weighted => {
            let mut num = 0.0;
            for &(symbol, f) in freqs.entries() {
                if f > 0.0 {
                    let code = table.code(symbol).ok_or(CodecError::CoverageGap(symbol))?;
                    num += f * code.len() as f64;
                }
            }
            Ok(num / freqs.total())
        }
        KspcMode::Unweighted => {
            let mut sum = 0usize;
            for symbol in freqs.symbols() {
                sum += table
                    .code(symbol)
                    .ok_or(CodecError::CoverageGap(symbol))?
                    .len();
            }
            Ok(sum as f64 / freqs.len() as f64)
        }
    }
}

pub fn kspc_empirical(trial: &Trial, count_enter: bool) -> Result<f64, MetricsError> {
    let n = char_len(&trial.transcribed);
    if n == 0 {
        return Err(MetricsError::EmptyTranscription);
    }
    Ok(trial.counted_keystrokes(count_enter) as f64 / n as f64)
}

/// Keystrokes an error-free typist needs for the final transcription.
pub fn minimal_keystrokes(
    trial: &Trial,
    table: &CodeTable,
    count_enter: bool,
) -> Result<usize, MetricsError> {
    let mut minimal = table.encoded_len(&text_symbols(&trial.transcribed))?;
    if count_enter && trial.is_finished() {
        minimal += trial.enter_keys;
    }
    Ok(minimal)
}

pub fn efficiency(trial: &Trial, table: &CodeTable, count_enter: bool) -> Result<f64, MetricsError> {
    if trial.transcribed.is_empty() {
        return Err(MetricsError::EmptyTranscription);
    }
    let minimal = minimal_keystrokes(trial, table, count_enter)?;
    let actual = trial.counted_keystrokes(count_enter);
    Ok(100.0 * minimal as f64 / actual as f64)
}

pub fn uncorrected_error_rate(trial: &Trial) -> f64 {
    error_rate(&trial.presented, &trial.transcribed)
}

pub fn error_rate(presented: &str, transcribed: &str) -> f64 {
    let denom = char_len(presented).max(char_len(transcribed));
    if denom == 0 {
        return 0.0;
    }
    100.0 * msd(presented, transcribed) as f64 / denom as f64
}

/// Minimum string distance: unit-cost Levenshtein distance over chars.
pub fn msd(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut row = vec![0; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        row[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            row[j + 1] = sub.min(prev[j + 1] + 1).min(row[j] + 1);
        }
        std::mem::swap(&mut prev, &mut row);
    }
    prev[b.len()]
}

/// Per-trial results as shown after each entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialMetrics {
    pub wpm: Option<f64>,
    pub kspc_empirical: Option<f64>,
    pub efficiency: Option<f64>,
    pub uncorrected_error_rate: f64,
    pub corrected_count: usize,
    pub duration_s: Option<f64>,
    pub keystrokes: usize,
    pub chars: usize,
}

impl TrialMetrics {
    pub fn compute(trial: &Trial, table: &CodeTable, count_enter: bool) -> Result<Self, MetricsError> {
        // fail loudly rather than silently dropping efficiency
        table.encoded_len(&text_symbols(&trial.transcribed))?;
        Ok(TrialMetrics {
            wpm: entry_speed_wpm(trial).ok(),
            kspc_empirical: kspc_empirical(trial, count_enter).ok(),
            efficiency: efficiency(trial, table, count_enter).ok(),
            uncorrected_error_rate: uncorrected_error_rate(trial),
            corrected_count: trial.corrected_count,
            duration_s: trial.duration_s(),
            keystrokes: trial.counted_keystrokes(count_enter),
            chars: char_len(&trial.transcribed),
        })
    }
}
