//! Text ingestion: UTF-8 decoding, NFC normalization and tokenization into a
//! stream of letters separated by collapsed word boundaries.
//!
//! A letter is a single Unicode scalar value. Dependent vowel signs and the
//! virama are ordinary letters unless the alphabet excludes them.

use std::collections::BTreeSet;
use std::io::Read;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::{codepoint, Error, Result};

/// Which code points count as letters. Everything else is a word boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphabetConfig {
    ranges: Vec<(char, char)>,
    include: BTreeSet<char>,
    exclude: BTreeSet<char>,
}

impl AlphabetConfig {
    pub fn new(
        ranges: Vec<(char, char)>,
        include: impl IntoIterator<Item = char>,
        exclude: impl IntoIterator<Item = char>,
    ) -> Result<Self> {
        for &(lo, hi) in &ranges {
            if lo > hi {
                return Err(Error::Config(format!(
                    "range {}..{} is reversed",
                    codepoint::format(lo),
                    codepoint::format(hi)
                )));
            }
        }
        let include: BTreeSet<char> = include.into_iter().collect();
        let exclude: BTreeSet<char> = exclude.into_iter().collect();
        if let Some(c) = include.intersection(&exclude).next() {
            return Err(Error::Config(format!(
                "{} is both included and excluded",
                codepoint::format(*c)
            )));
        }
        Ok(Self {
            ranges,
            include,
            exclude,
        })
    }

    /// Bengali block U+0980..U+09FF without the Bengali digits U+09E6..U+09EF.
    /// The danda U+0964 lies outside the block and is not a letter unless
    /// added through `include`.
    pub fn bangla() -> Self {
        Self {
            ranges: vec![('\u{0980}', '\u{09FF}')],
            include: BTreeSet::new(),
            exclude: ('\u{09E6}'..='\u{09EF}').collect(),
        }
    }

    /// Accepts every alphabetic scalar value (`char::is_alphabetic`) plus the
    /// explicit inclusions. Used for non-Bangla corpora and tests.
    pub fn any_alphabetic() -> Self {
        Self {
            ranges: Vec::new(),
            include: BTreeSet::new(),
            exclude: BTreeSet::new(),
        }
    }

    pub fn contains(&self, c: char) -> bool {
        if self.exclude.contains(&c) {
            return false;
        }
        if self.include.contains(&c) {
            return true;
        }
        if self.ranges.is_empty() {
            return c.is_alphabetic();
        }
        self.ranges.iter().any(|&(lo, hi)| lo <= c && c <= hi)
    }

    pub fn ranges(&self) -> &[(char, char)] {
        &self.ranges
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: AlphabetFile =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("alphabet: {e}")))?;
        raw.try_into()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_file(&self) -> AlphabetFile {
        AlphabetFile {
            ranges: self
                .ranges
                .iter()
                .map(|&(lo, hi)| [codepoint::format(lo), codepoint::format(hi)])
                .collect(),
            include: self.include.iter().map(|&c| codepoint::format(c)).collect(),
            exclude: self.exclude.iter().map(|&c| codepoint::format(c)).collect(),
        }
    }
}

impl Default for AlphabetConfig {
    fn default() -> Self {
        Self::bangla()
    }
}

/// On-disk JSON form of [`AlphabetConfig`]. An empty `ranges` list means
/// "any alphabetic character".
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphabetFile {
    #[serde(default)]
    pub ranges: Vec<[String; 2]>,
    #[serde(default)]
    pub include: Vec<String>,
    #[serde(default)]
    pub exclude: Vec<String>,
}

impl TryFrom<AlphabetFile> for AlphabetConfig {
    type Error = Error;

    fn try_from(raw: AlphabetFile) -> Result<Self> {
        let ranges = raw
            .ranges
            .iter()
            .map(|[lo, hi]| Ok((codepoint::parse(lo)?, codepoint::parse(hi)?)))
            .collect::<Result<Vec<_>>>()?;
        let include = raw
            .include
            .iter()
            .map(|s| codepoint::parse(s))
            .collect::<Result<Vec<_>>>()?;
        let exclude = raw
            .exclude
            .iter()
            .map(|s| codepoint::parse(s))
            .collect::<Result<Vec<_>>>()?;
        AlphabetConfig::new(ranges, include, exclude)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Token {
    Letter(char),
    Boundary,
}

/// Letters in input order with collapsed boundaries between words.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LetterStream {
    tokens: Vec<Token>,
    source_bytes: usize,
    letter_count: usize,
}

impl LetterStream {
    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn letter_count(&self) -> usize {
        self.letter_count
    }

    pub fn source_bytes(&self) -> usize {
        self.source_bytes
    }

    pub fn is_empty(&self) -> bool {
        self.letter_count == 0
    }

    pub fn letters(&self) -> impl Iterator<Item = char> + '_ {
        self.tokens.iter().filter_map(|t| match t {
            Token::Letter(c) => Some(*c),
            Token::Boundary => None,
        })
    }

    /// Maximal runs of letters between boundaries.
    pub fn words(&self) -> impl Iterator<Item = &[Token]> {
        self.tokens
            .split(|t| *t == Token::Boundary)
            .filter(|w| !w.is_empty())
    }

    pub fn word_count(&self) -> usize {
        self.words().count()
    }

    /// Builds a stream directly from tokens, collapsing adjacent boundaries.
    pub fn from_tokens(tokens: impl IntoIterator<Item = Token>) -> Self {
        let mut stream = Self::default();
        for t in tokens {
            stream.push(t);
        }
        stream
    }

    fn push(&mut self, token: Token) {
        match token {
            Token::Letter(_) => self.letter_count += 1,
            Token::Boundary => {
                if self.tokens.last() == Some(&Token::Boundary) {
                    return;
                }
            }
        }
        self.tokens.push(token);
    }

    /// Appends `other` with an implicit boundary in between.
    pub fn append(&mut self, other: LetterStream) {
        if !self.tokens.is_empty() && !other.tokens.is_empty() {
            self.push(Token::Boundary);
        }
        self.source_bytes += other.source_bytes;
        for t in other.tokens {
            self.push(t);
        }
    }

    pub fn concat(streams: impl IntoIterator<Item = LetterStream>) -> Self {
        let mut out = Self::default();
        for s in streams {
            out.append(s);
        }
        out
    }

    /// Text with each boundary rendered as a single space.
    pub fn to_text(&self) -> String {
        self.tokens
            .iter()
            .map(|t| match t {
                Token::Letter(c) => *c,
                Token::Boundary => ' ',
            })
            .collect()
    }
}

/// Decodes UTF-8 and returns the NFC form.
pub fn normalize_text(raw: &[u8]) -> Result<String> {
    let text = std::str::from_utf8(raw).map_err(|e| Error::InvalidEncoding {
        position: e.valid_up_to(),
    })?;
    Ok(text.nfc().collect())
}

pub fn tokenize(text: &str, config: &AlphabetConfig) -> LetterStream {
    let mut stream = LetterStream {
        source_bytes: text.len(),
        ..Default::default()
    };
    for c in text.chars() {
        if config.contains(c) {
            stream.push(Token::Letter(c));
        } else {
            stream.push(Token::Boundary);
        }
    }
    stream
}

/// Normalizes and tokenizes raw bytes. `source_bytes` is the raw length.
pub fn ingest_bytes(raw: &[u8], config: &AlphabetConfig) -> Result<LetterStream> {
    let text = normalize_text(raw)?;
    let mut stream = tokenize(&text, config);
    stream.source_bytes = raw.len();
    Ok(stream)
}

pub fn ingest_reader(mut reader: impl Read, config: &AlphabetConfig) -> Result<LetterStream> {
    let mut raw = Vec::new();
    reader
        .read_to_end(&mut raw)
        .map_err(|e| Error::io("<stdin>", e))?;
    ingest_bytes(&raw, config)
}

/// Reads and tokenizes files in parallel, then joins them in the given order
/// with a boundary between files.
pub fn ingest_files<P: AsRef<Path> + Sync>(paths: &[P], config: &AlphabetConfig) -> Result<LetterStream> {
    let streams = paths
        .par_iter()
        .map(|p| {
            let path = p.as_ref();
            let raw = std::fs::read(path).map_err(|e| Error::io(path, e))?;
            ingest_bytes(&raw, config)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LetterStream::concat(streams))
}
