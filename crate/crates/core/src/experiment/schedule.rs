use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ExperimentError, PhraseSet};

/// One phrase a participant is due to type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlannedTrial {
    pub participant: String,
    pub device: String,
    /// 1-based block number within the device condition.
    pub block: u32,
    /// 0-based phrase index within the block.
    pub phrase: u32,
    /// Index into the phrase set.
    pub phrase_id: usize,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub participants: Vec<String>,
    pub devices: Vec<String>,
    /// Device order per participant, as indices into `devices`.
    pub orders: Vec<Vec<usize>>,
    pub blocks: u32,
    pub phrases_per_block: u32,
    pub seed: u64,
    pub trials: Vec<PlannedTrial>,
}

impl Schedule {
    pub fn planned_trials(&self) -> usize {
        self.trials.len()
    }
}

/// Rows of a Williams-design Latin square of order `n`: the first row is
/// `0, 1, n-1, 2, n-2, ...` and row `r` adds `r` modulo `n`.
pub fn latin_square(n: usize) -> Vec<Vec<usize>> {
    let mut first = Vec::with_capacity(n);
    let (mut lo, mut hi) = (0usize, n);
    for i in 0..n {
        if i % 2 == 0 {
            first.push(lo);
            lo += 1;
        } else {
            hi -= 1;
            first.push(hi);
        }
    }
    // 0, n-1, 1, n-2, ... → shift so it reads 0, 1, n-1, 2, ...
    let first: Vec<usize> = first.iter().map(|&v| (n - v) % n).collect();
    (0..n)
        .map(|r| first.iter().map(|&v| (v + r) % n).collect())
        .collect()
}

pub fn make_schedule(
    phrases: &PhraseSet,
    participants: usize,
    devices: &[String],
    blocks: u32,
    phrases_per_block: u32,
    seed: u64,
) -> Result<Schedule, ExperimentError> {
    let k = devices.len();
    if k == 0 || participants == 0 {
        return Err(ExperimentError::Schedule(
            "need at least one participant and one device".into(),
        ));
    }
    if !participants.is_multiple_of(k) {
        return Err(ExperimentError::Schedule(format!(
            "{participants} participants cannot be counterbalanced over {k} devices; \
             use a multiple of {k} (e.g. {})",
            (participants / k + 1) * k
        )));
    }
    if blocks == 0 || phrases_per_block == 0 {
        return Err(ExperimentError::Schedule(
            "blocks and phrases per block must be positive".into(),
        ));
    }
    let needed = blocks as usize * phrases_per_block as usize;
    if needed > phrases.len() {
        return Err(ExperimentError::Schedule(format!(
            "{blocks} blocks x {phrases_per_block} phrases needs {needed} phrases, the set has {}",
            phrases.len()
        )));
    }

    let square = latin_square(k);
    let width = participants.to_string().len().max(2);
    let ids: Vec<String> = (1..=participants).map(|i| format!("p{i:0width$}")).collect();
    let orders: Vec<Vec<usize>> = (0..participants).map(|i| square[i % k].clone()).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trials = Vec::with_capacity(participants * k * needed);
    for (pid, order) in ids.iter().zip(&orders) {
        for &dev in order {
            for block in 1..=blocks {
                let picks = sample(&mut rng, phrases.len(), phrases_per_block as usize);
                for (phrase, phrase_id) in picks.into_iter().enumerate() {
                    trials.push(PlannedTrial {
                        participant: pid.clone(),
                        device: devices[dev].clone(),
                        block,
                        phrase: phrase as u32,
                        phrase_id,
                        text: phrases.phrases()[phrase_id].clone(),
                    });
                }
            }
        }
    }
    Ok(Schedule {
        participants: ids,
        devices: devices.to_vec(),
        orders,
        blocks,
        phrases_per_block,
        seed,
        trials,
    })
}
