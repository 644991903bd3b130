//! Scoring a layout against a letter stream and comparing layouts.
//!
//! A letter with a key loads that key's hand. A letter without one is "not
//! determined". Hand switching counts consecutive determined letters typed
//! by different hands; by default neither word boundaries nor undetermined
//! letters break the chain.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{LetterStream, Token};
use crate::layout::KeyboardLayout;
use crate::{Error, Hand, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvaluateOptions {
    /// Forget the previous hand at every word boundary.
    pub reset_on_boundary: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub layout: String,
    pub hand_switching: u64,
    pub left_load: u64,
    pub right_load: u64,
    pub not_determined: u64,
    pub total_letters: u64,
}

impl EvaluationReport {
    /// Builds a report from literal metric values; the total is their sum.
    pub fn from_counts(
        layout: impl Into<String>,
        hand_switching: u64,
        left_load: u64,
        right_load: u64,
        not_determined: u64,
    ) -> Self {
        Self {
            layout: layout.into(),
            hand_switching,
            left_load,
            right_load,
            not_determined,
            total_letters: left_load + right_load + not_determined,
        }
    }

    pub fn determined(&self) -> u64 {
        self.left_load + self.right_load
    }

    pub fn switching_per_determined(&self) -> f64 {
        match self.determined() {
            0 => 0.0,
            d => self.hand_switching as f64 / d as f64,
        }
    }

    /// Left load divided by right load; `None` when the right hand is idle.
    pub fn left_right_ratio(&self) -> Option<f64> {
        (self.right_load > 0).then(|| self.left_load as f64 / self.right_load as f64)
    }

    pub fn check(&self) -> Result<()> {
        if self.left_load + self.right_load + self.not_determined != self.total_letters {
            return Err(Error::Malformed {
                what: "report",
                reason: format!(
                    "{}: loads and not-determined do not sum to total {}",
                    self.layout, self.total_letters
                ),
            });
        }
        Ok(())
    }

    pub fn to_json(&self, config: serde_json::Value) -> String {
        let file = ReportFile {
            config,
            switching_per_determined: self.switching_per_determined(),
            left_right_ratio: self.left_right_ratio(),
            report: self.clone(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ReportFile = serde_json::from_str(text).map_err(|e| Error::Malformed {
            what: "report",
            reason: e.to_string(),
        })?;
        file.report.check()?;
        Ok(file.report)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct ReportFile {
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    config: serde_json::Value,
    #[serde(flatten)]
    report: EvaluationReport,
    #[serde(default)]
    switching_per_determined: f64,
    #[serde(default)]
    left_right_ratio: Option<f64>,
}

pub const REPORT_TSV_HEADER: &str = "layout\thand_switching\tleft_load\tright_load\tnot_determined\ttotal_letters\tswitching_per_determined\tleft_right_ratio";

pub fn reports_to_tsv(reports: &[EvaluationReport]) -> String {
    let mut out = format!("{REPORT_TSV_HEADER}\n");
    for r in reports {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{:.6}\t{}\n",
            r.layout,
            r.hand_switching,
            r.left_load,
            r.right_load,
            r.not_determined,
            r.total_letters,
            r.switching_per_determined(),
            r.left_right_ratio().map_or("-".to_string(), |x| format!("{x:.6}")),
        ));
    }
    out
}

/// Partial evaluation of a contiguous piece of a stream. Pieces combine with
/// [`Tally::merge`] in stream order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tally {
    pub hand_switching: u64,
    pub left_load: u64,
    pub right_load: u64,
    pub not_determined: u64,
    first: Option<Hand>,
    last: Option<Hand>,
    /// A boundary occurs before the first determined letter (or anywhere,
    /// if there is none).
    boundary_before_first: bool,
    /// A boundary occurs after the last determined letter (or anywhere, if
    /// there is none).
    boundary_after_last: bool,
}

impl Tally {
    pub fn scan(layout: &KeyboardLayout, tokens: &[Token], options: EvaluateOptions) -> Self {
        let mut t = Tally::default();
        for token in tokens {
            match *token {
                Token::Boundary => {
                    t.boundary_after_last = true;
                    if t.first.is_none() {
                        t.boundary_before_first = true;
                    }
                }
                Token::Letter(c) => match layout.hand_of(c) {
                    None => t.not_determined += 1,
                    Some(hand) => {
                        match hand {
                            Hand::Left => t.left_load += 1,
                            Hand::Right => t.right_load += 1,
                        }
                        let chained = !(options.reset_on_boundary && t.boundary_after_last);
                        if let Some(prev) = t.last {
                            if prev != hand && chained {
                                t.hand_switching += 1;
                            }
                        }
                        if t.first.is_none() {
                            t.first = Some(hand);
                        }
                        t.last = Some(hand);
                        t.boundary_after_last = false;
                    }
                },
            }
        }
        t
    }

    pub fn merge(self, next: Tally, options: EvaluateOptions) -> Tally {
        let junction = match (self.last, next.first) {
            (Some(a), Some(b)) if a != b => {
                let broken = options.reset_on_boundary
                    && (self.boundary_after_last || next.boundary_before_first);
                u64::from(!broken)
            }
            _ => 0,
        };
        Tally {
            hand_switching: self.hand_switching + next.hand_switching + junction,
            left_load: self.left_load + next.left_load,
            right_load: self.right_load + next.right_load,
            not_determined: self.not_determined + next.not_determined,
            first: self.first.or(next.first),
            last: next.last.or(self.last),
            boundary_before_first: if self.first.is_some() {
                self.boundary_before_first
            } else {
                self.boundary_before_first || next.boundary_before_first
            },
            boundary_after_last: if next.last.is_some() {
                next.boundary_after_last
            } else {
                next.boundary_after_last || self.boundary_after_last
            },
        }
    }

    pub fn into_report(self, layout: &str) -> EvaluationReport {
        EvaluationReport::from_counts(
            layout,
            self.hand_switching,
            self.left_load,
            self.right_load,
            self.not_determined,
        )
    }
}

pub fn evaluate(layout: &KeyboardLayout, stream: &LetterStream) -> EvaluationReport {
    evaluate_with(layout, stream, EvaluateOptions::default())
}

pub fn evaluate_with(layout: &KeyboardLayout, stream: &LetterStream, options: EvaluateOptions) -> EvaluationReport {
    Tally::scan(layout, stream.tokens(), options).into_report(layout.name())
}

/// Evaluates fixed-size token chunks in parallel and merges them in order.
pub fn evaluate_parallel(
    layout: &KeyboardLayout,
    stream: &LetterStream,
    options: EvaluateOptions,
    chunk_size: usize,
) -> EvaluationReport {
    stream
        .tokens()
        .par_chunks(chunk_size.max(1))
        .map(|chunk| Tally::scan(layout, chunk, options))
        .reduce(Tally::default, |a, b| a.merge(b, options))
        .into_report(layout.name())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonTable {
    pub rows: Vec<EvaluationReport>,
    /// Set when the reports do not all cover the same number of letters.
    pub warning: Option<String>,
}

/// Sorts reports by hand switching, descending; ties by layout name.
pub fn compare(reports: &[EvaluationReport]) -> Result<ComparisonTable> {
    if reports.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut rows = reports.to_vec();
    rows.sort_by(|a, b| {
        b.hand_switching
            .cmp(&a.hand_switching)
            .then_with(|| a.layout.cmp(&b.layout))
    });
    let totals: std::collections::BTreeSet<u64> = rows.iter().map(|r| r.total_letters).collect();
    let warning = (totals.len() > 1).then(|| {
        let list: Vec<String> = rows
            .iter()
            .map(|r| format!("{}={}", r.layout, r.total_letters))
            .collect();
        format!("reports cover different letter totals ({})", list.join(", "))
    });
    Ok(ComparisonTable { rows, warning })
}

impl ComparisonTable {
    /// Aligned plain-text table.
    pub fn render(&self) -> String {
        let header = [
            "Name",
            "Hand switching",
            "Left hand load",
            "Right hand load",
            "Not determined",
            "Switch/letter",
            "L:R load",
        ];
        let mut cells: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
        for r in &self.rows {
            cells.push(vec![
                r.layout.clone(),
                r.hand_switching.to_string(),
                r.left_load.to_string(),
                r.right_load.to_string(),
                r.not_determined.to_string(),
                format!("{:.4}", r.switching_per_determined()),
                r.left_right_ratio().map_or("-".into(), |x| format!("{x:.4}")),
            ]);
        }
        let widths: Vec<usize> = (0..header.len())
            .map(|i| cells.iter().map(|row| row[i].chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for (n, row) in cells.iter().enumerate() {
            let line: Vec<String> = row
                .iter()
                .enumerate()
                .map(|(i, cell)| {
                    let pad = widths[i] - cell.chars().count();
                    if i == 0 {
                        format!("{cell}{}", " ".repeat(pad))
                    } else {
                        format!("{}{cell}", " ".repeat(pad))
                    }
                })
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
            if n == 0 {
                let total: usize = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
                out.push_str(&"-".repeat(total));
                out.push('\n');
            }
        }
        if let Some(w) = &self.warning {
            out.push_str(&format!("warning: {w}\n"));
        }
        out
    }
}
