//! Minimum-redundancy four-key codes.
//!
//! A [`CodeTable`] maps every [`Symbol`] to a non-empty sequence of
//! [`Direction`]s. Tables are either generated from a
//! [`SymbolFrequencyTable`] with a 4-ary Huffman construction or loaded from
//! the tab-separated text format, and can be viewed as a [`CodeTree`] for
//! step-by-step selection.

mod freq;
mod huffman;
mod symbol;
mod table;
mod tree;

pub use freq::SymbolFrequencyTable;
pub use huffman::{build_code_table, build_code_table_with_arity, padding_count};
pub use symbol::{text_symbols, Command, Direction, Symbol};
pub use table::{Code, CodeTable, TableSource};
pub use tree::{CodeTree, Node, NodeId};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CodecError {
    #[error("frequency table is empty")]
    EmptyTable,
    #[error("all frequencies are zero")]
    AllZero,
    #[error("duplicate symbol {0}")]
    DuplicateSymbol(Symbol),
    #[error("invalid frequency {freq} for symbol {symbol}")]
    InvalidFrequency { symbol: Symbol, freq: f64 },
    #[error("unknown symbol token {0:?}")]
    UnknownToken(String),
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: invalid key {found:?} in code (expected L, R, U or D)")]
    BadDirection { line: usize, found: char },
    #[error("empty code for symbol {0}")]
    EmptyCode(Symbol),
    #[error("prefix violation: code of {prefix} ({prefix_code}) is a prefix of the code of {other} ({other_code})")]
    PrefixViolation {
        prefix: Symbol,
        prefix_code: Code,
        other: Symbol,
        other_code: Code,
    },
    #[error("symbol {symbol} at position {position} is not in the code table")]
    NotInTable { symbol: Symbol, position: usize },
    #[error("key sequence ends inside a code after {consumed} keys")]
    IncompleteCode { consumed: usize },
    #[error("no code continues with {direction} at key {position}")]
    ExitsTree { direction: Direction, position: usize },
    #[error("symbol {0} has positive frequency but no code")]
    CoverageGap(Symbol),
    #[error("unsupported arity {0}")]
    UnsupportedArity(usize),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for CodecError {
    fn from(e: std::io::Error) -> Self {
        CodecError::Io(e.to_string())
    }
}

/// Σ p(c)·len(code(c)) over the normalized frequencies.
///
/// Zero-frequency symbols need not be covered by the table.
pub fn weighted_code_length(
    table: &CodeTable,
    freqs: &SymbolFrequencyTable,
) -> Result<f64, CodecError> {
    let mut total = 0.0;
    for (symbol, p) in freqs.normalized() {
        if p == 0.0 {
            continue;
        }
        let code = table.code(symbol).ok_or(CodecError::CoverageGap(symbol))?;
        total += p * code.len() as f64;
    }
    Ok(total)
}

/// Base-4 Shannon entropy of the normalized frequencies.
pub fn entropy_base4(freqs: &SymbolFrequencyTable) -> f64 {
    freqs
        .normalized()
        .filter(|&(_, p)| p > 0.0)
        .map(|(_, p)| -p * p.log(4.0))
        .sum()
}
