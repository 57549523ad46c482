use std::path::Path;

use tracing::warn;

use super::ExperimentError;

/// The bundled phrase set: short everyday sentences in lowercase.
pub const DEFAULT_PHRASES: &str = include_str!("../../data/phrases.txt");

/// Normalized presentation phrases: lowercase `a`-`z` and single spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhraseSet {
    phrases: Vec<String>,
    dropped_chars: usize,
}

impl PhraseSet {
    pub fn parse(text: &str) -> Result<Self, ExperimentError> {
        let mut phrases = Vec::new();
        let mut dropped_chars = 0;
        for line in text.lines() {
            let (phrase, dropped) = normalize_phrase(line);
            dropped_chars += dropped;
            if !phrase.is_empty() {
                phrases.push(phrase);
            }
        }
        if dropped_chars > 0 {
            warn!(dropped_chars, "dropped characters outside a-z and space");
        }
        if phrases.is_empty() {
            return Err(ExperimentError::EmptyPhraseSet);
        }
        Ok(PhraseSet {
            phrases,
            dropped_chars,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ExperimentError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn builtin() -> Self {
        Self::parse(DEFAULT_PHRASES).expect("bundled phrase set is valid")
    }

    pub fn phrases(&self) -> &[String] {
        &self.phrases
    }

    pub fn len(&self) -> usize {
        self.phrases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phrases.is_empty()
    }

    /// Characters removed during normalization.
    pub fn dropped_chars(&self) -> usize {
        self.dropped_chars
    }
}

/// Lowercases, drops anything outside `a`-`z` and space, and collapses runs
/// of spaces. Returns the phrase and the number of dropped characters.
pub fn normalize_phrase(line: &str) -> (String, usize) {
    let mut out = String::with_capacity(line.len());
    let mut dropped = 0;
    for c in line.chars().flat_map(char::to_lowercase) {
        match c {
            'a'..='z' => out.push(c),
            ' ' | '\t' => {
                if !out.is_empty() && !out.ends_with(' ') {
                    out.push(' ');
                }
            }
            '\r' => {}
            _ => dropped += 1,
        }
    }
    while out.ends_with(' ') {
        out.pop();
    }
    (out, dropped)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_punctuation_and_case() {
        assert_eq!(normalize_phrase("Hello, World!"), ("hello world".to_string(), 2));
        assert_eq!(normalize_phrase("  a  -  b "), ("a b".to_string(), 1));
    }

    #[test]
    fn five_hundred_lines_give_five_hundred_phrases() {
        let text: String = (0..500).map(|i| format!("phrase number {}\n", "x".repeat(i % 7 + 1))).collect();
        let set = PhraseSet::parse(&text).unwrap();
        assert_eq!(set.len(), 500);
    }

    #[test]
    fn blank_lines_are_skipped_and_punctuation_only_fails() {
        let set = PhraseSet::parse("one\n\n   \ntwo\n").unwrap();
        assert_eq!(set.phrases(), &["one".to_string(), "two".to_string()]);
        assert!(matches!(
            PhraseSet::parse("!!!\n...\n,,\n"),
            Err(ExperimentError::EmptyPhraseSet)
        ));
    }
}
