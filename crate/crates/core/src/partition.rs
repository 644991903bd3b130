//! Greedy two-hand partition of a ranked alphabet.
//!
//! The four most frequent letters seed the hands (1st and 4th right, 2nd and
//! 3rd left). Every later letter, in rank order, is scored against the letters
//! each hand holds at that moment. It goes right only when its association
//! with the left hand is strictly larger in both support and confidence;
//! otherwise it goes left.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::stats::{self, NGramTable, RankedLetter, SideScore};
use crate::{Error, Hand, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionOptions {
    /// Send letters whose comparison is mixed or tied to the lighter hand
    /// instead of the left hand.
    pub balance_tiebreak: bool,
    /// Only letters with at least this many occurrences are partitioned.
    pub min_count: u64,
}

impl Default for PartitionOptions {
    fn default() -> Self {
        Self {
            balance_tiebreak: false,
            min_count: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// Seeded right (1st or 4th ranked letter).
    InitialRight,
    /// Seeded left (2nd or 3rd ranked letter).
    InitialLeft,
    /// Fewer than four letters: alternating right, left, right.
    Degenerate,
    /// Left support and left confidence both strictly exceed the right ones.
    LeftDominant,
    Otherwise,
    /// Mixed or tied comparison sent to the lighter-loaded hand.
    BalanceTiebreak,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::InitialRight => "initial_right",
            Rule::InitialLeft => "initial_left",
            Rule::Degenerate => "degenerate",
            Rule::LeftDominant => "left_dominant",
            Rule::Otherwise => "otherwise",
            Rule::BalanceTiebreak => "balance_tiebreak",
        };
        f.write_str(s)
    }
}

/// One step of the assignment, with the scores it was decided on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    #[serde(with = "crate::serde_char")]
    pub letter: char,
    pub count: u64,
    pub left: SideScore,
    pub right: SideScore,
    pub hand: Hand,
    pub rule: Rule,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct HandPartition {
    left: Vec<char>,
    right: Vec<char>,
    trace: Vec<Decision>,
    degenerate: bool,
}

impl HandPartition {
    pub fn left(&self) -> &[char] {
        &self.left
    }

    pub fn right(&self) -> &[char] {
        &self.right
    }

    pub fn side(&self, hand: Hand) -> &[char] {
        match hand {
            Hand::Left => &self.left,
            Hand::Right => &self.right,
        }
    }

    pub fn trace(&self) -> &[Decision] {
        &self.trace
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn hand_of(&self, letter: char) -> Option<Hand> {
        if self.left.contains(&letter) {
            Some(Hand::Left)
        } else if self.right.contains(&letter) {
            Some(Hand::Right)
        } else {
            None
        }
    }

    pub fn len(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Summed monogram counts of the letters on `hand`.
    pub fn load(&self, hand: Hand) -> u64 {
        self.trace.iter().filter(|d| d.hand == hand).map(|d| d.count).sum()
    }

    fn place(&mut self, decision: Decision) {
        match decision.hand {
            Hand::Left => self.left.push(decision.letter),
            Hand::Right => self.right.push(decision.letter),
        }
        self.trace.push(decision);
    }

    /// Scores `letter` against both current hands and places it.
    pub fn assign(
        &mut self,
        letter: char,
        count: u64,
        digraphs: &NGramTable,
        options: &PartitionOptions,
    ) -> Result<&Decision> {
        let involvement = digraphs.involvement_total(letter);
        self.assign_with(letter, count, digraphs, involvement, options)
    }

    fn assign_with(
        &mut self,
        letter: char,
        count: u64,
        digraphs: &NGramTable,
        involvement: u64,
        options: &PartitionOptions,
    ) -> Result<&Decision> {
        if self.hand_of(letter).is_some() {
            return Err(Error::AlreadyAssigned(letter));
        }
        let left = stats::side_scores_with(letter, &self.left, digraphs, involvement)?;
        let right = stats::side_scores_with(letter, &self.right, digraphs, involvement)?;
        let (hand, rule) = decide(&left, &right, || {
            (self.load(Hand::Left), self.load(Hand::Right))
        }, options);
        self.place(Decision {
            letter,
            count,
            left,
            right,
            hand,
            rule,
        });
        Ok(self.trace.last().unwrap())
    }

    /// Rebuilds the hands from a trace, checking that no letter repeats.
    pub fn replay(trace: &[Decision]) -> Result<Self> {
        let mut out = Self::default();
        for d in trace {
            if out.hand_of(d.letter).is_some() {
                return Err(Error::AlreadyAssigned(d.letter));
            }
            out.degenerate |= d.rule == Rule::Degenerate;
            out.place(d.clone());
        }
        Ok(out)
    }
}

fn decide(
    left: &SideScore,
    right: &SideScore,
    loads: impl FnOnce() -> (u64, u64),
    options: &PartitionOptions,
) -> (Hand, Rule) {
    let left_dominant = left.cumulative_support > right.cumulative_support
        && left.cumulative_confidence > right.cumulative_confidence;
    if left_dominant {
        return (Hand::Right, Rule::LeftDominant);
    }
    if options.balance_tiebreak {
        let right_dominant = right.cumulative_support > left.cumulative_support
            && right.cumulative_confidence > left.cumulative_confidence;
        if !right_dominant {
            let (l, r) = loads();
            let hand = if r < l { Hand::Right } else { Hand::Left };
            return (hand, Rule::BalanceTiebreak);
        }
    }
    (Hand::Left, Rule::Otherwise)
}

/// Seeds the hands from the four most frequent letters.
pub fn initialize(ranking: &[RankedLetter]) -> Result<HandPartition> {
    if ranking.len() < 4 {
        return Err(Error::TooFewLetters {
            found: ranking.len(),
        });
    }
    let mut p = HandPartition::default();
    let seeds = [
        (Hand::Right, Rule::InitialRight),
        (Hand::Left, Rule::InitialLeft),
        (Hand::Left, Rule::InitialLeft),
        (Hand::Right, Rule::InitialRight),
    ];
    for (r, (hand, rule)) in ranking.iter().zip(seeds) {
        p.place(Decision {
            letter: r.letter,
            count: r.count,
            left: SideScore::default(),
            right: SideScore::default(),
            hand,
            rule,
        });
    }
    Ok(p)
}

/// Fallback for alphabets under four letters: right, left, right. The result
/// is flagged degenerate.
pub fn initialize_degenerate(ranking: &[RankedLetter]) -> HandPartition {
    let mut p = HandPartition {
        degenerate: true,
        ..Default::default()
    };
    for (i, r) in ranking.iter().enumerate() {
        p.place(Decision {
            letter: r.letter,
            count: r.count,
            left: SideScore::default(),
            right: SideScore::default(),
            hand: if i % 2 == 0 { Hand::Right } else { Hand::Left },
            rule: Rule::Degenerate,
        });
    }
    p
}

/// Runs the whole greedy assignment over every letter with at least
/// `options.min_count` occurrences.
pub fn partition_all(
    mono: &NGramTable,
    digraphs: &NGramTable,
    options: &PartitionOptions,
) -> Result<HandPartition> {
    let ranking: Vec<RankedLetter> = stats::ranked_monograms(mono)?
        .into_iter()
        .filter(|r| r.count >= options.min_count)
        .collect();
    partition_ranked(&ranking, digraphs, options)
}

pub fn partition_ranked(
    ranking: &[RankedLetter],
    digraphs: &NGramTable,
    options: &PartitionOptions,
) -> Result<HandPartition> {
    let mut p = initialize(ranking)?;
    let involvement: HashMap<char, u64> = digraphs.involvement_totals();
    for r in &ranking[4..] {
        let inv = involvement.get(&r.letter).copied().unwrap_or(0);
        p.assign_with(r.letter, r.count, digraphs, inv, options)?;
    }
    debug_assert!({
        let l: HashSet<_> = p.left.iter().collect();
        p.right.iter().all(|c| !l.contains(c))
    });
    Ok(p)
}

/// JSON form of a partition, including the full decision trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionFile {
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub config: serde_json::Value,
    pub total_letters: u64,
    #[serde(default)]
    pub degenerate: bool,
    pub left: Vec<String>,
    pub right: Vec<String>,
    pub trace: Vec<Decision>,
}

impl HandPartition {
    pub fn to_file(&self, total_letters: u64, config: serde_json::Value) -> PartitionFile {
        let strings = |v: &[char]| v.iter().map(|c| c.to_string()).collect();
        PartitionFile {
            config,
            total_letters,
            degenerate: self.degenerate,
            left: strings(&self.left),
            right: strings(&self.right),
            trace: self.trace.clone(),
        }
    }

    pub fn to_json(&self, total_letters: u64, config: serde_json::Value) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_file(total_letters, config))
            .expect("partition serializes");
        s.push('\n');
        s
    }

    /// Monogram count of every partitioned letter, as recorded in the trace.
    pub fn frequencies(&self) -> HashMap<char, u64> {
        self.trace.iter().map(|d| (d.letter, d.count)).collect()
    }
}

impl PartitionFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed {
            what: "partition file",
            reason: e.to_string(),
        })
    }

    /// Replays the trace and checks it against the stored hand lists.
    pub fn into_partition(self) -> Result<HandPartition> {
        let mut p = HandPartition::replay(&self.trace)?;
        p.degenerate |= self.degenerate;
        let strings = |v: &[char]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>();
        if strings(&p.left) != self.left || strings(&p.right) != self.right {
            return Err(Error::Malformed {
                what: "partition file",
                reason: "left/right lists disagree with the trace".into(),
            });
        }
        Ok(p)
    }
}
