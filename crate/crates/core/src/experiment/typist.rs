//! Scripted typists that drive the engine over a schedule.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ExperimentError, Schedule, SessionStore, TrialKey};
use crate::codec::{Direction, Symbol};
use crate::engine::{Engine, Keyboard, Trial};
use crate::metrics::TrialMetrics;

/// Per-device timing: mean key interval in block 1, shrinking as
/// `block^-practice_exponent`, with uniform relative jitter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimingProfile {
    pub key_interval_ms: f64,
    pub practice_exponent: f64,
    pub jitter: f64,
}

impl TimingProfile {
    pub fn for_device(device: &str) -> TimingProfile {
        let (key_interval_ms, practice_exponent) = match device {
            "mouse" => (1250.0, 0.10),
            "gamepad" => (1330.0, 0.16),
            "eye-tracker" | "eyetracker" | "eye" => (2100.0, 0.22),
            _ => (1500.0, 0.12),
        };
        TimingProfile {
            key_interval_ms,
            practice_exponent,
            jitter: 0.25,
        }
    }

    fn interval(&self, block: u32, rng: &mut impl Rng) -> u64 {
        let base = self.key_interval_ms * (block.max(1) as f64).powf(-self.practice_exponent);
        let noise = if self.jitter > 0.0 {
            1.0 + self.jitter * rng.random_range(-1.0..=1.0)
        } else {
            1.0
        };
        (base * noise).round().max(1.0) as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Typist {
    /// Follows the engine's next-key hint and never errs.
    Perfect,
    /// Substitutes a wrong letter with probability `error_prob`
    /// (scaled down by `block^-practice_exponent`) and backspaces it with
    /// probability `fix_prob`.
    Noisy { error_prob: f64, fix_prob: f64 },
}

impl std::str::FromStr for Typist {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "perfect" => Ok(Typist::Perfect),
            "noisy" => Ok(Typist::Noisy {
                error_prob: 0.06,
                fix_prob: 0.85,
            }),
            _ => Err(format!("unknown typist {s:?} (perfect|noisy)")),
        }
    }
}

struct Clock<'a, R> {
    now: u64,
    profile: TimingProfile,
    block: u32,
    rng: &'a mut R,
    started: bool,
}

impl<R: Rng> Clock<'_, R> {
    fn tick(&mut self) -> u64 {
        if self.started {
            self.now += self.profile.interval(self.block, self.rng);
        }
        self.started = true;
        self.now
    }
}

fn press_symbol<R: Rng>(
    engine: &mut Engine,
    symbol: Symbol,
    clock: &mut Clock<'_, R>,
) -> Result<(), ExperimentError> {
    let keys: Vec<Direction> = engine
        .keyboard()
        .table()
        .code(symbol)
        .map(|c| c.keys().to_vec())
        .unwrap_or_default();
    for d in keys {
        engine.press(d, clock.tick())?;
    }
    Ok(())
}

/// Types `presented` and closes the trial with Enter when the table has one.
pub fn type_phrase(
    keyboard: Arc<Keyboard>,
    presented: &str,
    typist: Typist,
    profile: TimingProfile,
    block: u32,
    rng: &mut impl Rng,
) -> Result<Trial, ExperimentError> {
    let mut engine = Engine::new_trial(Arc::clone(&keyboard), presented)?;
    let mut clock = Clock {
        now: 0,
        profile,
        block,
        rng,
        started: false,
    };
    match typist {
        Typist::Perfect => {
            while let Some(d) = engine.expected_next_key() {
                let t = clock.tick();
                engine.press(d, t)?;
            }
        }
        Typist::Noisy {
            error_prob,
            fix_prob,
        } => {
            let letters: Vec<Symbol> = keyboard
                .table()
                .iter()
                .map(|(s, _)| s)
                .filter(|s| matches!(s, Symbol::Char(_)))
                .collect();
            let scale = (block.max(1) as f64).powf(-profile.practice_exponent);
            for c in presented.chars() {
                let intended = Symbol::from_char(c);
                if letters.len() > 1 && clock.rng.random_bool((error_prob * scale).clamp(0.0, 1.0)) {
                    let wrong = loop {
                        let s = letters[clock.rng.random_range(0..letters.len())];
                        if s != intended {
                            break s;
                        }
                    };
                    press_symbol(&mut engine, wrong, &mut clock)?;
                    if clock.rng.random_bool(fix_prob.clamp(0.0, 1.0)) {
                        press_symbol(&mut engine, Symbol::BACKSPACE, &mut clock)?;
                        press_symbol(&mut engine, intended, &mut clock)?;
                    }
                } else {
                    press_symbol(&mut engine, intended, &mut clock)?;
                }
            }
        }
    }
    if keyboard.table().contains(Symbol::ENTER) {
        press_symbol(&mut engine, Symbol::ENTER, &mut clock)?;
    }
    Ok(engine.into_trial())
}

/// One simulated trial with its key and metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedTrial {
    pub key: TrialKey,
    pub trial: Trial,
    pub metrics: TrialMetrics,
}

/// Runs `typist` over every planned trial of `schedule`.
pub fn simulate(
    schedule: &Schedule,
    keyboard: &Arc<Keyboard>,
    typist: Typist,
    count_enter: bool,
    seed: u64,
) -> Result<Vec<SimulatedTrial>, ExperimentError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    schedule
        .trials
        .iter()
        .map(|planned| {
            let profile = TimingProfile::for_device(&planned.device);
            let trial = type_phrase(
                Arc::clone(keyboard),
                &planned.text,
                typist,
                profile,
                planned.block,
                &mut rng,
            )?;
            let metrics = TrialMetrics::compute(&trial, keyboard.table(), count_enter)?;
            Ok(SimulatedTrial {
                key: TrialKey {
                    participant: planned.participant.clone(),
                    device: planned.device.clone(),
                    block: planned.block,
                    phrase: planned.phrase,
                },
                trial,
                metrics,
            })
        })
        .collect()
}

/// Appends simulated trials to `store`.
pub fn record(
    store: &mut SessionStore,
    trials: &[SimulatedTrial],
    count_enter: bool,
) -> Result<(), ExperimentError> {
    for t in trials {
        store.append(&t.key, &t.trial, count_enter, &t.metrics)?;
    }
    Ok(())
}
