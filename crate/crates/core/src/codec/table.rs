use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use super::{CodeTree, CodecError, Direction, Symbol};

/// A non-empty direction sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Code(Vec<Direction>);

impl Code {
    pub fn new(keys: Vec<Direction>) -> Option<Code> {
        if keys.is_empty() {
            None
        } else {
            Some(Code(keys))
        }
    }

    pub fn keys(&self) -> &[Direction] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn starts_with(&self, other: &Code) -> bool {
        self.0.starts_with(&other.0)
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl FromStr for Code {
    type Err = CodecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let keys = s
            .chars()
            .map(|c| Direction::from_letter(c).ok_or(CodecError::BadDirection { line: 0, found: c }))
            .collect::<Result<Vec<_>, _>>()?;
        Code::new(keys).ok_or_else(|| CodecError::Malformed {
            line: 0,
            reason: "empty code".into(),
        })
    }
}

impl Serialize for Code {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Code {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableSource {
    Generated,
    Loaded,
}

/// Prefix-free mapping from symbols to codes.
#[derive(Debug, Clone)]
pub struct CodeTable {
    entries: BTreeMap<Symbol, Code>,
    source: TableSource,
}

impl PartialEq for CodeTable {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl CodeTable {
    /// Builds a table after checking it is non-empty and prefix-free.
    pub fn from_entries(
        entries: impl IntoIterator<Item = (Symbol, Code)>,
        source: TableSource,
    ) -> Result<Self, CodecError> {
        let mut map = BTreeMap::new();
        for (symbol, code) in entries {
            if code.is_empty() {
                return Err(CodecError::EmptyCode(symbol));
            }
            if map.insert(symbol, code).is_some() {
                return Err(CodecError::DuplicateSymbol(symbol));
            }
        }
        if map.is_empty() {
            return Err(CodecError::EmptyTable);
        }
        check_prefix_free(&map)?;
        Ok(Self {
            entries: map,
            source,
        })
    }

    /// Parses `<token>\t<code>` lines; `#` lines and blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self, CodecError> {
        let mut entries = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            if raw.trim().is_empty() || raw.starts_with('#') {
                continue;
            }
            let (token, code) = raw.split_once('\t').ok_or_else(|| CodecError::Malformed {
                line,
                reason: "expected <symbol><TAB><code>".into(),
            })?;
            let symbol: Symbol = token.parse().map_err(|e| CodecError::Malformed {
                line,
                reason: format!("{e}"),
            })?;
            let code = code.trim_end_matches('\r');
            let keys = code
                .chars()
                .map(|c| Direction::from_letter(c).ok_or(CodecError::BadDirection { line, found: c }))
                .collect::<Result<Vec<_>, _>>()?;
            let code = Code::new(keys).ok_or(CodecError::EmptyCode(symbol))?;
            entries.push((symbol, code));
        }
        Self::from_entries(entries, TableSource::Loaded)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, CodecError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), CodecError> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    /// Canonical text form: one line per symbol in symbol order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (symbol, code) in &self.entries {
            out.push_str(&format!("{}\t{}\n", symbol.token(), code));
        }
        out
    }

    /// Hex SHA-256 of the canonical text form.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_text().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn source(&self) -> TableSource {
        self.source
    }

    pub fn code(&self, symbol: Symbol) -> Option<&Code> {
        self.entries.get(&symbol)
    }

    pub fn contains(&self, symbol: Symbol) -> bool {
        self.entries.contains_key(&symbol)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Symbol, &Code)> + '_ {
        self.entries.iter().map(|(s, c)| (*s, c))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn tree(&self) -> CodeTree {
        CodeTree::from_table(self)
    }

    /// Concatenates the codes of `text`.
    pub fn encode(&self, text: &[Symbol]) -> Result<Vec<Direction>, CodecError> {
        let mut out = Vec::new();
        for (position, &symbol) in text.iter().enumerate() {
            let code = self
                .code(symbol)
                .ok_or(CodecError::NotInTable { symbol, position })?;
            out.extend_from_slice(code.keys());
        }
        Ok(out)
    }

    /// Number of keys `encode` would produce.
    pub fn encoded_len(&self, text: &[Symbol]) -> Result<usize, CodecError> {
        text.iter().enumerate().try_fold(0, |acc, (position, &symbol)| {
            self.code(symbol)
                .map(|c| acc + c.len())
                .ok_or(CodecError::NotInTable { symbol, position })
        })
    }

    pub fn decode(&self, keys: &[Direction]) -> Result<Vec<Symbol>, CodecError> {
        self.tree().decode(keys)
    }
}

/// Sorting codes lexicographically puts any prefix immediately before some
/// code it prefixes, so checking neighbours is enough.
fn check_prefix_free(map: &BTreeMap<Symbol, Code>) -> Result<(), CodecError> {
    let mut sorted: Vec<(&Code, Symbol)> = map.iter().map(|(s, c)| (c, *s)).collect();
    sorted.sort();
    for pair in sorted.windows(2) {
        let (a, sa) = pair[0];
        let (b, sb) = pair[1];
        if b.starts_with(a) {
            return Err(CodecError::PrefixViolation {
                prefix: sa,
                prefix_code: a.clone(),
                other: sb,
                other_code: b.clone(),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::text_symbols;

    const PARTIAL: &str = "[space]\tLL\n[Bksp]\tDD\n[Enter]\tDR\ne\tLR\nt\tUL\nr\tLUL\ng\tURD\nb\tLURL\nv\tLURU\nq\tLURDRL\nz\tLURDRU\n";

    fn partial() -> CodeTable {
        CodeTable::parse(PARTIAL).unwrap()
    }

    #[test]
    fn encodes_partial_letters() {
        let t = partial();
        let e = t.encode(&text_symbols("e")).unwrap();
        assert_eq!(e, vec![Direction::Left, Direction::Right]);
        let q: String = t.encode(&text_symbols("q")).unwrap().iter().map(|d| d.letter()).collect();
        assert_eq!(q, "LURDRL");
        assert!(t.encode(&[]).unwrap().is_empty());
    }

    #[test]
    fn encode_reports_position_of_missing_symbol() {
        let err = partial().encode(&text_symbols("tex")).unwrap_err();
        assert_eq!(
            err,
            CodecError::NotInTable {
                symbol: Symbol::Char('x'),
                position: 2
            }
        );
    }

    #[test]
    fn decodes_partial_sequences() {
        let t = partial();
        let keys: Code = "LRLL".parse().unwrap();
        assert_eq!(t.decode(keys.keys()).unwrap(), vec![Symbol::Char('e'), Symbol::SPACE]);
        assert_eq!(t.decode(&[]).unwrap(), vec![]);
        let partial: Code = "LUR".parse().unwrap();
        assert_eq!(
            t.decode(partial.keys()),
            Err(CodecError::IncompleteCode { consumed: 3 })
        );
        let exit: Code = "LRR".parse().unwrap();
        assert_eq!(
            t.decode(exit.keys()),
            Err(CodecError::ExitsTree {
                direction: Direction::Right,
                position: 2
            })
        );
    }

    #[test]
    fn prefix_violation_names_both_symbols() {
        let err = CodeTable::parse("a\tL\nb\tLR\n").unwrap_err();
        match err {
            CodecError::PrefixViolation { prefix, other, .. } => {
                assert_eq!(prefix, Symbol::Char('a'));
                assert_eq!(other, Symbol::Char('b'));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            CodeTable::parse("a\tLR\nb\tLR\n"),
            Err(CodecError::PrefixViolation { .. })
        ));
    }

    #[test]
    fn malformed_lines_are_rejected() {
        assert!(matches!(
            CodeTable::parse("a LR\n"),
            Err(CodecError::Malformed { line: 1, .. })
        ));
        assert_eq!(
            CodeTable::parse("a\tLR\nb\tLX\n"),
            Err(CodecError::BadDirection { line: 2, found: 'X' })
        );
        assert!(matches!(
            CodeTable::parse("[shift]\tLR\n"),
            Err(CodecError::Malformed { line: 1, .. })
        ));
        assert_eq!(
            CodeTable::parse("a\t\n"),
            Err(CodecError::EmptyCode(Symbol::Char('a')))
        );
        assert_eq!(CodeTable::parse("# nothing\n"), Err(CodecError::EmptyTable));
    }

    #[test]
    fn save_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("table.tsv");
        let t = partial();
        t.save(&path).unwrap();
        let back = CodeTable::load(&path).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.hash(), t.hash());
        assert_eq!(back.source(), TableSource::Loaded);
    }
}
