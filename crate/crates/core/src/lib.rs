//! Corpus-driven two-hand keyboard layout optimizer.
//!
//! Pipeline: [`corpus`] turns text into a letter stream, [`stats`] counts
//! n-grams and measures letter-pair association, [`partition`] splits the
//! alphabet between the hands greedily to favour alternation, [`layout`]
//! places each hand's letters on keys by frequency and [`evaluator`] scores
//! any layout against a corpus.

pub mod codepoint;
pub mod corpus;
mod error;
pub mod evaluator;
pub mod layout;
pub mod partition;
pub mod pipeline;
pub mod stats;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use corpus::{AlphabetConfig, LetterStream, Token};
pub use error::{Error, Result};
pub use evaluator::{compare, evaluate, ComparisonTable, EvaluationReport};
pub use layout::{build_layout, Geometry, KeyboardLayout, Slot};
pub use partition::{partition_all, HandPartition, PartitionOptions};
pub use stats::{count_ngrams, ranked_monograms, side_scores, NGramTable, SideScore};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Hand {
    Left,
    Right,
}

impl Hand {
    pub fn other(self) -> Hand {
        match self {
            Hand::Left => Hand::Right,
            Hand::Right => Hand::Left,
        }
    }
}

impl fmt::Display for Hand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hand::Left => "left",
            Hand::Right => "right",
        })
    }
}

/// Serializes a `char` as a one-character string.
pub(crate) mod serde_char {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(c: &char, s: S) -> Result<S::Ok, S::Error> {
        let mut buf = [0u8; 4];
        s.serialize_str(c.encode_utf8(&mut buf))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<char, D::Error> {
        let s = String::deserialize(d)?;
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => Ok(c),
            _ => Err(D::Error::custom(format!("expected a single letter, got {s:?}"))),
        }
    }
}
