use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ExperimentError, StoredTrial};
use crate::metrics::TrialMetrics;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Wpm,
    Efficiency,
    Kspc,
    ErrorRate,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::Wpm, Metric::Efficiency, Metric::Kspc, Metric::ErrorRate];

    pub fn of(self, m: &TrialMetrics) -> Option<f64> {
        match self {
            Metric::Wpm => m.wpm,
            Metric::Efficiency => m.efficiency,
            Metric::Kspc => m.kspc_empirical,
            Metric::ErrorRate => Some(m.uncorrected_error_rate),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Metric::Wpm => "wpm",
            Metric::Efficiency => "efficiency",
            Metric::Kspc => "kspc",
            Metric::ErrorRate => "error_rate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupBy {
    Device,
    Block,
    DeviceBlock,
}

/// Sample mean and SD (n − 1 denominator; `None` for a single value).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub n: usize,
    pub mean: f64,
    pub sd: Option<f64>,
}

impl Stat {
    pub fn of(values: &[f64]) -> Option<Stat> {
        let n = values.len();
        if n == 0 {
            return None;
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let sd = (n > 1).then(|| {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        });
        Some(Stat { n, mean, sd })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub device: Option<String>,
    pub block: Option<u32>,
    pub trials: usize,
    pub stats: BTreeMap<Metric, Stat>,
}

/// Devices in order of first appearance.
pub fn device_order(trials: &[StoredTrial]) -> Vec<String> {
    let mut seen: Vec<String> = Vec::new();
    for t in trials {
        if !seen.contains(&t.key.device) {
            seen.push(t.key.device.clone());
        }
    }
    seen
}

pub fn summarize(trials: &[StoredTrial], group_by: GroupBy) -> Result<Vec<GroupSummary>, ExperimentError> {
    if trials.is_empty() {
        return Err(ExperimentError::EmptyStore);
    }
    let devices = device_order(trials);
    let mut groups: BTreeMap<(usize, u32), Vec<&TrialMetrics>> = BTreeMap::new();
    for t in trials {
        let dev = devices.iter().position(|d| *d == t.key.device).unwrap();
        let key = match group_by {
            GroupBy::Device => (dev, 0),
            GroupBy::Block => (0, t.key.block),
            GroupBy::DeviceBlock => (dev, t.key.block),
        };
        groups.entry(key).or_default().push(&t.metrics);
    }
    Ok(groups
        .into_iter()
        .map(|((dev, block), members)| {
            let stats = Metric::ALL
                .iter()
                .filter_map(|&metric| {
                    let values: Vec<f64> = members.iter().filter_map(|m| metric.of(m)).collect();
                    Stat::of(&values).map(|s| (metric, s))
                })
                .collect();
            GroupSummary {
                device: (group_by != GroupBy::Block).then(|| devices[dev].clone()),
                block: (group_by != GroupBy::Device).then_some(block),
                trials: members.len(),
                stats,
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Factor {
    Device,
    Block,
}

/// Participant × condition matrix of per-cell means, for
/// [`rm_anova`](super::rm_anova). Returns the condition labels and the matrix.
pub fn condition_matrix(
    trials: &[StoredTrial],
    metric: Metric,
    factor: Factor,
) -> Result<(Vec<String>, Vec<Vec<f64>>), ExperimentError> {
    let conditions: Vec<String> = match factor {
        Factor::Device => device_order(trials),
        Factor::Block => {
            let mut blocks: Vec<u32> = trials.iter().map(|t| t.key.block).collect();
            blocks.sort_unstable();
            blocks.dedup();
            blocks.iter().map(|b| b.to_string()).collect()
        }
    };
    let mut cells: BTreeMap<&str, Vec<Vec<f64>>> = BTreeMap::new();
    for t in trials {
        let Some(v) = metric.of(&t.metrics) else { continue };
        let label = match factor {
            Factor::Device => t.key.device.clone(),
            Factor::Block => t.key.block.to_string(),
        };
        let j = conditions.iter().position(|c| *c == label).unwrap();
        cells
            .entry(&t.key.participant)
            .or_insert_with(|| vec![Vec::new(); conditions.len()])[j]
            .push(v);
    }
    let mut matrix = Vec::with_capacity(cells.len());
    for (participant, row) in cells {
        let mut means = Vec::with_capacity(row.len());
        for (j, values) in row.iter().enumerate() {
            let stat = Stat::of(values).ok_or_else(|| {
                ExperimentError::Anova(format!(
                    "participant {participant} has no {} values for condition {}",
                    metric.label(),
                    conditions[j]
                ))
            })?;
            means.push(stat.mean);
        }
        matrix.push(means);
    }
    Ok((conditions, matrix))
}
