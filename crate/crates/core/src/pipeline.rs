//! File-based stages shared by the command line tool and the bindings.
//!
//! Every stage reads its inputs from files written by the previous one and
//! embeds a config echo in what it writes. Input corpora are read in sorted
//! path order so the outputs do not depend on how the files were listed.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::corpus::{self, AlphabetConfig, LetterStream};
use crate::evaluator::{self, EvaluateOptions, EvaluationReport};
use crate::layout::{self, Geometry, KeyboardLayout};
use crate::partition::{self, HandPartition, PartitionFile, PartitionOptions};
use crate::stats::{self, NGramTable};
use crate::{codepoint, Error, Result};

pub const MONO_FILE: &str = "mono.tsv";
pub const DI_FILE: &str = "di.tsv";
pub const TRI_FILE: &str = "tri.tsv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const PARTITION_FILE: &str = "partition.json";
pub const LAYOUT_FILE: &str = "layout.json";
pub const REPORTS_TSV: &str = "reports.tsv";
pub const COMPARISON_FILE: &str = "comparison.txt";

/// Settings file accepted through `--config` / `LAYOUTFORGE_CONFIG`. Every
/// default is the literal algorithm behaviour.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub alphabet: Option<PathBuf>,
    pub geometry: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub coverage: Option<u64>,
    pub balance_tiebreak: bool,
    pub reset_on_boundary: bool,
    pub span_boundaries: bool,
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config: Self = serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        // Relative paths inside the file are relative to the file.
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [&mut config.alphabet, &mut config.geometry, &mut config.out]
            .into_iter()
            .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(config)
    }
}

/// Resolved configuration: loaded alphabet and geometry plus flags.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub alphabet: AlphabetConfig,
    pub geometry: Geometry,
    pub partition: PartitionOptions,
    pub evaluate: EvaluateOptions,
    pub span_boundaries: bool,
}

impl Default for Pipeline {
    fn default() -> Self {
        Self {
            alphabet: AlphabetConfig::default(),
            geometry: Geometry::default(),
            partition: PartitionOptions::default(),
            evaluate: EvaluateOptions::default(),
            span_boundaries: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub config: Value,
    pub total_letters: u64,
    pub distinct_letters: usize,
    pub words: usize,
    pub source_bytes: usize,
}

pub struct CorpusStats {
    pub mono: NGramTable,
    pub di: NGramTable,
    pub tri: NGramTable,
    pub summary: Summary,
}

impl Pipeline {
    pub fn from_config(config: &PipelineConfig) -> Result<Self> {
        let alphabet = match &config.alphabet {
            Some(p) => AlphabetConfig::load(p)?,
            None => AlphabetConfig::default(),
        };
        let geometry = match &config.geometry {
            Some(p) => Geometry::load(p)?,
            None => Geometry::default(),
        };
        Ok(Self {
            alphabet,
            geometry,
            partition: PartitionOptions {
                balance_tiebreak: config.balance_tiebreak,
                min_count: config.coverage.unwrap_or(1).max(1),
            },
            evaluate: EvaluateOptions {
                reset_on_boundary: config.reset_on_boundary,
            },
            span_boundaries: config.span_boundaries,
        })
    }

    /// Echo of every setting that influences the outputs.
    pub fn echo(&self) -> Value {
        json!({
            "alphabet": self.alphabet.to_file(),
            "geometry": self.geometry.to_file(),
            "coverage": self.partition.min_count,
            "balance_tiebreak": self.partition.balance_tiebreak,
            "reset_on_boundary": self.evaluate.reset_on_boundary,
            "span_boundaries": self.span_boundaries,
        })
    }

    fn tsv_header(&self) -> String {
        format!("# config: {}\n", serde_json::to_string(&self.echo()).unwrap())
    }

    pub fn ingest(&self, inputs: &[PathBuf]) -> Result<LetterStream> {
        let mut sorted = inputs.to_vec();
        sorted.sort();
        corpus::ingest_files(&sorted, &self.alphabet)
    }

    pub fn ingest_stdin(&self) -> Result<LetterStream> {
        corpus::ingest_reader(std::io::stdin().lock(), &self.alphabet)
    }

    pub fn stats(&self, stream: &LetterStream) -> Result<CorpusStats> {
        if stream.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let count = |n| stats::count_ngrams_with(stream, n, self.span_boundaries);
        let mono = count(1)?;
        Ok(CorpusStats {
            summary: Summary {
                config: self.echo(),
                total_letters: mono.total_letters(),
                distinct_letters: mono.len(),
                words: stream.word_count(),
                source_bytes: stream.source_bytes(),
            },
            di: count(2)?,
            tri: count(3)?,
            mono,
        })
    }

    pub fn write_stats(&self, stats: &CorpusStats, out: &Path, focus: &[char]) -> Result<()> {
        create_dir(out)?;
        let header = self.tsv_header();
        write(out.join(MONO_FILE), header.clone() + &stats::table_to_tsv(&stats.mono))?;
        write(out.join(DI_FILE), header.clone() + &stats::table_to_tsv(&stats.di))?;
        write(out.join(TRI_FILE), header.clone() + &stats::table_to_tsv(&stats.tri))?;
        write(out.join(SUMMARY_FILE), to_pretty(&stats.summary))?;
        for &c in focus {
            let rows = stats.di.associations(c)?;
            let name = format!("assoc-{}.tsv", codepoint::format(c));
            write(out.join(name), header.clone() + &stats::associations_to_tsv(&rows))?;
        }
        Ok(())
    }

    /// Reads the mono and digraph tables back from a stats directory.
    pub fn read_stats(&self, dir: &Path) -> Result<(NGramTable, NGramTable)> {
        let summary: Summary = serde_json::from_str(&read(&dir.join(SUMMARY_FILE))?).map_err(|e| {
            Error::Malformed {
                what: "summary",
                reason: e.to_string(),
            }
        })?;
        let mono = stats::table_from_tsv(1, &read(&dir.join(MONO_FILE))?, summary.total_letters)?;
        let di = stats::table_from_tsv(2, &read(&dir.join(DI_FILE))?, summary.total_letters)?;
        if mono.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        Ok((mono, di))
    }

    pub fn partition(&self, mono: &NGramTable, di: &NGramTable) -> Result<HandPartition> {
        partition::partition_all(mono, di, &self.partition)
    }

    pub fn write_partition(&self, p: &HandPartition, total_letters: u64, out: &Path) -> Result<PathBuf> {
        create_dir(out)?;
        let path = out.join(PARTITION_FILE);
        write(&path, p.to_json(total_letters, self.echo()))?;
        Ok(path)
    }

    pub fn read_partition(path: &Path) -> Result<HandPartition> {
        PartitionFile::from_json(&read(path)?)?.into_partition()
    }

    /// Places a partition on keys, using the frequencies stored in its trace.
    pub fn layout(&self, p: &HandPartition, name: &str) -> Result<KeyboardLayout> {
        let freq = p.frequencies();
        let layout = layout::build_layout_with(p, |c| freq[&c], self.geometry.clone())?;
        Ok(layout.with_name(name))
    }

    pub fn write_layout(&self, layout: &KeyboardLayout, out: &Path) -> Result<PathBuf> {
        create_dir(out)?;
        let path = out.join(LAYOUT_FILE);
        write(&path, layout::serialize_layout_with(layout, self.echo()))?;
        Ok(path)
    }

    pub fn evaluate(&self, layouts: &[KeyboardLayout], stream: &LetterStream) -> Vec<EvaluationReport> {
        layouts
            .iter()
            .map(|l| evaluator::evaluate_with(l, stream, self.evaluate))
            .collect()
    }

    /// Writes `report-<name>.json` per layout and a combined TSV.
    pub fn write_reports(&self, reports: &[EvaluationReport], out: &Path) -> Result<Vec<PathBuf>> {
        create_dir(out)?;
        let mut paths: Vec<PathBuf> = Vec::new();
        for r in reports {
            let mut stem = format!("report-{}", slug(&r.layout));
            let mut i = 2;
            while paths.iter().any(|p| p.file_stem().unwrap() == stem.as_str()) {
                stem = format!("report-{}-{i}", slug(&r.layout));
                i += 1;
            }
            let path = out.join(format!("{stem}.json"));
            write(&path, r.to_json(self.echo()))?;
            paths.push(path);
        }
        write(
            out.join(REPORTS_TSV),
            self.tsv_header() + &evaluator::reports_to_tsv(reports),
        )?;
        Ok(paths)
    }

    /// Stats, partition, layout, evaluation of the new layout and any
    /// baselines, and the comparison table. Returns the rendered table.
    pub fn run_all(&self, inputs: &[PathBuf], baselines: &[PathBuf], out: &Path) -> Result<String> {
        let stream = self.ingest(inputs)?;
        let stats = self.stats(&stream)?;
        self.write_stats(&stats, out, &[])?;
        let p = self.partition(&stats.mono, &stats.di)?;
        self.write_partition(&p, stats.summary.total_letters, out)?;
        let generated = self.layout(&p, "optimized")?;
        self.write_layout(&generated, out)?;
        let mut layouts = vec![generated];
        for b in baselines {
            layouts.push(layout::load_layout(b)?);
        }
        let reports = self.evaluate(&layouts, &stream);
        self.write_reports(&reports, out)?;
        let table = evaluator::compare(&reports)?.render();
        write(out.join(COMPARISON_FILE), table.clone())?;
        Ok(table)
    }
}

pub fn read_reports(paths: &[PathBuf]) -> Result<Vec<EvaluationReport>> {
    paths
        .iter()
        .map(|p| EvaluationReport::from_json(&read(p)?))
        .collect()
}

fn slug(name: &str) -> String {
    let s: String = name
        .chars()
        .map(|c| if c.is_alphanumeric() || c == '-' || c == '_' { c } else { '-' })
        .collect();
    if s.is_empty() {
        "layout".into()
    } else {
        s
    }
}

fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub(crate) fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub(crate) fn write(path: impl AsRef<Path>, contents: String) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}
