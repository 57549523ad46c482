//! Independent oracles shared by the integration tests. Nothing here calls
//! into the code under test except to build inputs.

#![allow(dead_code)]

use std::sync::Arc;

use h4_core::codec::{CodeTable, Direction, Symbol, SymbolFrequencyTable};
use h4_core::engine::{Engine, Keyboard};
use rand::Rng;

pub const PARTIAL: &str = include_str!("../../data/partial.tsv");
pub const PHRASES: &str = include_str!("../../data/phrases.txt");

pub fn partial_layout() -> Arc<Keyboard> {
    Keyboard::new(CodeTable::parse(PARTIAL).unwrap())
}

/// Letters a, b, c, ... used as symbol names for synthetic tables.
pub fn letters(n: usize) -> Vec<Symbol> {
    (0..n as u8).map(|i| Symbol::Char((b'a' + i) as char)).collect()
}

pub fn table_from(weights: &[f64]) -> SymbolFrequencyTable {
    SymbolFrequencyTable::new(letters(weights.len()).into_iter().zip(weights.iter().copied()).collect()).unwrap()
}

/// Random positive weights; a quarter of draws use small integers to force ties.
pub fn random_weights(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let ties = rng.random_bool(0.25);
    (0..n)
        .map(|_| {
            if ties {
                rng.random_range(1..=4) as f64
            } else {
                rng.random_range(0.001..1.0)
            }
        })
        .collect()
}

/// Minimum of Σ pᵢ·lᵢ over every length vector admitting a 4-ary prefix code.
///
/// A length vector admits a prefix code exactly when Σ 4^-lᵢ ≤ 1, so this
/// enumerates all prefix codes up to relabelling. Lengths run to `n`, past
/// the deepest any optimal code on `n` symbols can need.
pub fn brute_force_min_length(weights: &[f64]) -> f64 {
    let n = weights.len();
    let total: f64 = weights.iter().sum();
    let max_len = n.max(1) as u32;
    let budget = 4u64.pow(max_len);
    let mut best = f64::INFINITY;
    let mut lengths = vec![1u32; n];
    loop {
        let kraft: u64 = lengths.iter().map(|&l| 4u64.pow(max_len - l)).sum();
        if kraft <= budget {
            let cost: f64 = weights.iter().zip(&lengths).map(|(w, &l)| w * l as f64).sum::<f64>() / total;
            best = best.min(cost);
        }
        let mut i = 0;
        loop {
            if i == n {
                return best;
            }
            lengths[i] += 1;
            if lengths[i] <= max_len {
                break;
            }
            lengths[i] = 1;
            i += 1;
        }
    }
}

pub fn entropy4(weights: &[f64]) -> f64 {
    let total: f64 = weights.iter().sum();
    weights
        .iter()
        .filter(|&&w| w > 0.0)
        .map(|&w| {
            let p = w / total;
            -p * p.ln() / 4f64.ln()
        })
        .sum()
}

/// Edit distance by plain recursion over the three edit operations.
pub fn msd_recursive(a: &[char], b: &[char]) -> usize {
    match (a.split_first(), b.split_first()) {
        (None, _) => b.len(),
        (_, None) => a.len(),
        (Some((x, ra)), Some((y, rb))) => {
            let sub = msd_recursive(ra, rb) + usize::from(x != y);
            let del = msd_recursive(ra, b) + 1;
            let ins = msd_recursive(a, rb) + 1;
            sub.min(del).min(ins)
        }
    }
}

/// Sums of squares for a subjects × conditions table, from the textbook
/// definitions: SS_total = SS_conditions + SS_subjects + SS_error.
pub struct HandAnova {
    pub ss_conditions: f64,
    pub ss_subjects: f64,
    pub ss_error: f64,
    pub df1: f64,
    pub df2: f64,
    pub f: f64,
}

pub fn hand_anova(x: &[Vec<f64>]) -> HandAnova {
    let n = x.len() as f64;
    let k = x[0].len() as f64;
    let all: Vec<f64> = x.iter().flatten().copied().collect();
    let grand = all.iter().sum::<f64>() / (n * k);
    let ss_total: f64 = all.iter().map(|v| (v - grand).powi(2)).sum();
    let ss_conditions: f64 = (0..x[0].len())
        .map(|j| {
            let m = x.iter().map(|r| r[j]).sum::<f64>() / n;
            n * (m - grand).powi(2)
        })
        .sum();
    let ss_subjects: f64 = x
        .iter()
        .map(|r| k * (r.iter().sum::<f64>() / k - grand).powi(2))
        .sum();
    let ss_error = ss_total - ss_conditions - ss_subjects;
    let df1 = k - 1.0;
    let df2 = (k - 1.0) * (n - 1.0);
    HandAnova {
        ss_conditions,
        ss_subjects,
        ss_error,
        df1,
        df2,
        f: (ss_conditions / df1) / (ss_error / df2),
    }
}

/// Least-squares line through the normal equations, and R² = 1 − SS_res/SS_tot.
pub fn normal_equations(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    // [n  sx ] [a]   [sy ]
    // [sx sxx] [b] = [sxy]
    let det = n * sxx - sx * sx;
    let a = (sy * sxx - sx * sxy) / det;
    let b = (n * sxy - sx * sy) / det;
    let mean = sy / n;
    let ss_res: f64 = points.iter().map(|p| (p.1 - a - b * p.0).powi(2)).sum();
    let ss_tot: f64 = points.iter().map(|p| (p.1 - mean).powi(2)).sum();
    (a, b, 1.0 - ss_res / ss_tot)
}

/// A random key sequence for `presented`: each press follows the shortest
/// correct path with probability `skill`, otherwise a uniform direction.
/// Stops at Enter or after `max_keys`. Timestamps are nondecreasing.
pub fn fuzzed_log(
    keyboard: &Arc<Keyboard>,
    presented: &str,
    skill: f64,
    max_keys: usize,
    rng: &mut impl Rng,
) -> Vec<(Direction, u64)> {
    let mut engine = Engine::new_trial(Arc::clone(keyboard), presented).unwrap();
    let mut keys = Vec::new();
    let mut t = rng.random_range(0..10_000u64);
    while keys.len() < max_keys && !engine.is_finished() {
        let d = match engine.expected_next_key() {
            Some(d) if rng.random_bool(skill) => d,
            Some(_) => Direction::from_index(rng.random_range(0..4)).unwrap(),
            None => match keyboard.table().code(Symbol::ENTER) {
                Some(code) => code.keys()[0],
                None => break,
            },
        };
        engine.press(d, t).unwrap();
        keys.push((d, t));
        t += rng.random_range(0..1500u64);
    }
    keys
}
