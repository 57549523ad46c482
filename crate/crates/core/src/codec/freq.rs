use std::collections::HashSet;
use std::path::Path;

use super::{CodecError, Symbol};

/// Symbols with nonnegative relative frequencies.
///
/// Entry order is preserved as given; frequencies are stored unnormalized and
/// [`normalized`](Self::normalized) yields the view that sums to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolFrequencyTable {
    entries: Vec<(Symbol, f64)>,
    total: f64,
}

impl SymbolFrequencyTable {
    pub fn new(entries: Vec<(Symbol, f64)>) -> Result<Self, CodecError> {
        if entries.is_empty() {
            return Err(CodecError::EmptyTable);
        }
        let mut seen = HashSet::with_capacity(entries.len());
        for &(symbol, freq) in &entries {
            if !seen.insert(symbol) {
                return Err(CodecError::DuplicateSymbol(symbol));
            }
            if !freq.is_finite() || freq < 0.0 {
                return Err(CodecError::InvalidFrequency { symbol, freq });
            }
        }
        let total: f64 = entries.iter().map(|&(_, f)| f).sum();
        if total <= 0.0 {
            return Err(CodecError::AllZero);
        }
        Ok(Self { entries, total })
    }

    /// Parses `<token>\t<frequency>` lines; `#` lines and blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self, CodecError> {
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            if raw.trim().is_empty() || raw.starts_with('#') {
                continue;
            }
            let (token, value) = raw.split_once('\t').ok_or_else(|| CodecError::Malformed {
                line,
                reason: "expected <symbol><TAB><frequency>".into(),
            })?;
            let symbol: Symbol = token.parse()?;
            let freq: f64 = value.trim().parse().map_err(|_| CodecError::Malformed {
                line,
                reason: format!("invalid frequency {:?}", value.trim()),
            })?;
            entries.push((symbol, freq));
        }
        Self::new(entries)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, CodecError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn entries(&self) -> &[(Symbol, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.entries.iter().map(|&(s, _)| s)
    }

    pub fn frequency(&self, symbol: Symbol) -> Option<f64> {
        self.entries
            .iter()
            .find(|&&(s, _)| s == symbol)
            .map(|&(_, f)| f)
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn normalized(&self) -> impl Iterator<Item = (Symbol, f64)> + '_ {
        let total = self.total;
        self.entries.iter().map(move |&(s, f)| (s, f / total))
    }

    /// Restricts the table to `keep`, preserving order.
    pub fn restrict(&self, keep: impl Fn(Symbol) -> bool) -> Result<Self, CodecError> {
        Self::new(
            self.entries
                .iter()
                .copied()
                .filter(|&(s, _)| keep(s))
                .collect(),
        )
    }

    /// Rescales this table to occupy `1 - Σ extra` of the traffic and appends
    /// `extra`, whose values are read as absolute shares of all traffic.
    pub fn with_shares(&self, extra: &[(Symbol, f64)]) -> Result<Self, CodecError> {
        let reserved: f64 = extra.iter().map(|&(_, f)| f).sum();
        if !(0.0..1.0).contains(&reserved) {
            return Err(CodecError::Malformed {
                line: 0,
                reason: format!("command shares sum to {reserved}, must be in [0, 1)"),
            });
        }
        let scale = (1.0 - reserved) / self.total;
        let mut entries: Vec<(Symbol, f64)> =
            self.entries.iter().map(|&(s, f)| (s, f * scale)).collect();
        entries.extend_from_slice(extra);
        Self::new(entries)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (symbol, freq) in &self.entries {
            out.push_str(&format!("{}\t{}\n", symbol.token(), freq));
        }
        out
    }
}
