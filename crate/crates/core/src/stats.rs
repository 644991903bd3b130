//! N-gram counting and the association measures used by the partitioner.
//!
//! Support of a gram is `100 * count / total_letters`. Confidence of a digraph
//! with respect to a focus letter divides by the focus letter's involvement:
//! the total count of every digraph that has the focus letter in either
//! position. All percentages are computed from integer count sums, so two
//! code paths that add the same counts produce bit-identical floats.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::corpus::{LetterStream, Token};
use crate::{codepoint, Error, Result};

/// Frequency table of n-grams of one order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NGramTable {
    n: usize,
    counts: BTreeMap<String, u64>,
    total_letters: u64,
}

fn check_order(n: usize) -> Result<()> {
    if (1..=3).contains(&n) {
        Ok(())
    } else {
        Err(Error::InvalidOrder(n))
    }
}

/// Counts every window of `n` consecutive letters that does not cross a
/// word boundary.
pub fn count_ngrams(stream: &LetterStream, n: usize) -> Result<NGramTable> {
    count_ngrams_with(stream, n, false)
}

/// Like [`count_ngrams`]; with `span_boundaries` the boundaries are ignored and
/// windows run across words.
pub fn count_ngrams_with(stream: &LetterStream, n: usize, span_boundaries: bool) -> Result<NGramTable> {
    check_order(n)?;
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut window: Vec<char> = Vec::with_capacity(n);
    let mut gram = String::new();
    for token in stream.tokens() {
        match *token {
            Token::Boundary => {
                if !span_boundaries {
                    window.clear();
                }
            }
            Token::Letter(c) => {
                if window.len() == n {
                    window.remove(0);
                }
                window.push(c);
                if window.len() == n {
                    gram.clear();
                    gram.extend(window.iter());
                    match counts.get_mut(gram.as_str()) {
                        Some(v) => *v += 1,
                        None => {
                            counts.insert(gram.clone(), 1);
                        }
                    }
                }
            }
        }
    }
    Ok(NGramTable {
        n,
        counts,
        total_letters: stream.letter_count() as u64,
    })
}

impl NGramTable {
    /// Builds a table from explicit counts, e.g. reference frequency tables.
    pub fn from_counts<S: Into<String>>(
        n: usize,
        counts: impl IntoIterator<Item = (S, u64)>,
        total_letters: u64,
    ) -> Result<Self> {
        check_order(n)?;
        let mut map = BTreeMap::new();
        for (gram, count) in counts {
            let gram: String = gram.into();
            if gram.chars().count() != n {
                return Err(Error::InvalidTable(format!(
                    "gram {gram:?} does not have {n} letters"
                )));
            }
            if count == 0 {
                return Err(Error::InvalidTable(format!("gram {gram:?} has zero count")));
            }
            if map.insert(gram.clone(), count).is_some() {
                return Err(Error::InvalidTable(format!("duplicate gram {gram:?}")));
            }
        }
        let table = Self {
            n,
            counts: map,
            total_letters,
        };
        let sum = table.sum_counts();
        if n == 1 && sum != total_letters {
            return Err(Error::InvalidTable(format!(
                "monogram counts sum to {sum}, expected total {total_letters}"
            )));
        }
        if n > 1 && sum > total_letters {
            return Err(Error::InvalidTable(format!(
                "{n}-gram counts sum to {sum}, more than total {total_letters}"
            )));
        }
        Ok(table)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn total_letters(&self) -> u64 {
        self.total_letters
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn count(&self, gram: &str) -> u64 {
        self.counts.get(gram).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(g, &c)| (g.as_str(), c))
    }

    pub fn sum_counts(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Entries by descending count, ties by ascending code points.
    pub fn sorted(&self) -> Vec<(&str, u64)> {
        let mut rows: Vec<_> = self.iter().collect();
        rows.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        rows
    }

    /// Adds another table of the same order (per-file partial counts).
    pub fn merge(&mut self, other: &NGramTable) -> Result<()> {
        if self.n != other.n {
            return Err(Error::InvalidTable(format!(
                "cannot merge order {} into order {}",
                other.n, self.n
            )));
        }
        for (gram, count) in &other.counts {
            *self.counts.entry(gram.clone()).or_insert(0) += count;
        }
        self.total_letters += other.total_letters;
        Ok(())
    }

    pub fn support(&self, gram: &str) -> Result<f64> {
        if self.total_letters == 0 {
            return Err(Error::EmptyCorpus);
        }
        Ok(100.0 * self.count(gram) as f64 / self.total_letters as f64)
    }

    /// Sum of counts of digraphs containing `letter` at either position.
    /// A doubled digraph contributes once.
    pub fn involvement_total(&self, letter: char) -> u64 {
        if self.n != 2 {
            return 0;
        }
        self.iter()
            .filter(|(gram, _)| gram.chars().any(|c| c == letter))
            .map(|(_, count)| count)
            .sum()
    }

    /// Involvement totals for every letter in one pass.
    pub fn involvement_totals(&self) -> HashMap<char, u64> {
        let mut totals = HashMap::new();
        if self.n != 2 {
            return totals;
        }
        for (gram, count) in self.iter() {
            let mut chars = gram.chars();
            let (a, b) = (chars.next().unwrap(), chars.next().unwrap());
            *totals.entry(a).or_insert(0) += count;
            if b != a {
                *totals.entry(b).or_insert(0) += count;
            }
        }
        totals
    }

    pub fn digraph_confidence(&self, focus: char, digraph: &str) -> Result<f64> {
        if digraph.chars().count() != 2 || !digraph.contains(focus) {
            return Err(Error::InvalidTable(format!(
                "digraph {digraph:?} does not contain {}",
                codepoint::format(focus)
            )));
        }
        let involvement = self.involvement_total(focus);
        if involvement == 0 {
            return Err(Error::NoInvolvement(focus));
        }
        Ok(100.0 * self.count(digraph) as f64 / involvement as f64)
    }

    /// Every digraph containing `focus`, by descending count.
    pub fn associations(&self, focus: char) -> Result<Vec<Association>> {
        let involvement = self.involvement_total(focus);
        if involvement == 0 {
            return Err(Error::NoInvolvement(focus));
        }
        let mut rows = Vec::new();
        for (gram, count) in self.sorted() {
            if gram.contains(focus) {
                rows.push(Association {
                    digraph: gram.to_string(),
                    count,
                    support: self.support(gram)?,
                    confidence: 100.0 * count as f64 / involvement as f64,
                });
            }
        }
        Ok(rows)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Association {
    pub digraph: String,
    pub count: u64,
    pub support: f64,
    pub confidence: f64,
}

/// Cumulative association of a letter with one hand's current letter set.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SideScore {
    /// Summed digraph count behind both percentages.
    pub pair_count: u64,
    pub cumulative_support: f64,
    pub cumulative_confidence: f64,
}

/// Sums support and confidence of `focus` against every letter of `side`,
/// in both orders. A letter without any digraph scores zero.
pub fn side_scores(focus: char, side: &[char], digraphs: &NGramTable) -> Result<SideScore> {
    let involvement = digraphs.involvement_total(focus);
    side_scores_with(focus, side, digraphs, involvement)
}

pub(crate) fn side_scores_with(
    focus: char,
    side: &[char],
    digraphs: &NGramTable,
    involvement: u64,
) -> Result<SideScore> {
    if digraphs.n() != 2 {
        return Err(Error::InvalidOrder(digraphs.n()));
    }
    if digraphs.total_letters() == 0 {
        return Err(Error::EmptyCorpus);
    }
    if involvement == 0 {
        return Ok(SideScore::default());
    }
    let mut pair_count = 0u64;
    let mut buf = String::with_capacity(8);
    for &x in side {
        buf.clear();
        buf.push(focus);
        buf.push(x);
        pair_count += digraphs.count(&buf);
        if x != focus {
            buf.clear();
            buf.push(x);
            buf.push(focus);
            pair_count += digraphs.count(&buf);
        }
    }
    Ok(SideScore {
        pair_count,
        cumulative_support: 100.0 * pair_count as f64 / digraphs.total_letters() as f64,
        cumulative_confidence: 100.0 * pair_count as f64 / involvement as f64,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedLetter {
    pub letter: char,
    pub count: u64,
    pub percentage: f64,
}

/// Monograms by strictly descending count; ties by ascending code point.
pub fn ranked_monograms(mono: &NGramTable) -> Result<Vec<RankedLetter>> {
    if mono.n() != 1 {
        return Err(Error::InvalidOrder(mono.n()));
    }
    if mono.is_empty() || mono.total_letters() == 0 {
        return Err(Error::EmptyCorpus);
    }
    mono.sorted()
        .into_iter()
        .map(|(gram, count)| {
            Ok(RankedLetter {
                letter: gram.chars().next().unwrap(),
                count,
                percentage: mono.support(gram)?,
            })
        })
        .collect()
}

/// `gram<TAB>count<TAB>percentage` rows, descending by count.
pub fn table_to_tsv(table: &NGramTable) -> String {
    let mut out = String::from("gram\tcount\tpercentage\n");
    for (gram, count) in table.sorted() {
        let pct = 100.0 * count as f64 / table.total_letters().max(1) as f64;
        out.push_str(&format!("{gram}\t{count}\t{pct:.6}\n"));
    }
    out
}

/// Parses [`table_to_tsv`] output. Leading `#` comment lines are skipped.
pub fn table_from_tsv(n: usize, text: &str, total_letters: u64) -> Result<NGramTable> {
    let malformed = |reason: String| Error::Malformed {
        what: "n-gram TSV",
        reason,
    };
    let mut lines = text.lines().enumerate().skip_while(|(_, l)| l.starts_with('#'));
    match lines.next() {
        Some((_, header)) if header.starts_with("gram\tcount") => {}
        _ => return Err(malformed("missing `gram\\tcount\\tpercentage` header".into())),
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split('\t');
        let (Some(gram), Some(count)) = (fields.next(), fields.next()) else {
            return Err(malformed(format!("line {}: expected at least two columns", i + 1)));
        };
        let count: u64 = count
            .parse()
            .map_err(|_| malformed(format!("line {}: bad count {count:?}", i + 1)))?;
        rows.push((gram.to_string(), count));
    }
    NGramTable::from_counts(n, rows, total_letters)
}

/// `digraph<TAB>count<TAB>support<TAB>confidence` for one focus letter.
pub fn associations_to_tsv(rows: &[Association]) -> String {
    let mut out = String::from("digraph\tcount\tsupport\tconfidence\n");
    for r in rows {
        out.push_str(&format!(
            "{}\t{}\t{:.6}\t{:.6}\n",
            r.digraph, r.count, r.support, r.confidence
        ));
    }
    out
}
