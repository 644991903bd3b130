use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use layoutforge::evaluator;
use layoutforge::layout;
use layoutforge::pipeline::{self, Pipeline, PipelineConfig};
use layoutforge::{Error, LetterStream};

/// Two-hand keyboard layout optimizer driven by letter-pair associations.
#[derive(Parser)]
#[command(name = "layoutforge", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Settings file (JSON); explicit flags take precedence.
    #[arg(long, global = true, env = "LAYOUTFORGE_CONFIG")]
    config: Option<PathBuf>,

    /// Alphabet definition (JSON with `ranges`, `include`, `exclude`).
    #[arg(long, global = true)]
    alphabet: Option<PathBuf>,

    /// Keyboard geometry (JSON with `rows`, `columns`, `layers`).
    #[arg(long, global = true)]
    geometry: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Send mixed or tied decisions to the lighter hand.
    #[arg(long, global = true)]
    balance_tiebreak: bool,

    /// Forget the previous hand at word boundaries when counting switches.
    #[arg(long, global = true)]
    reset_on_boundary: bool,

    /// Let digraphs and trigraphs run across word boundaries.
    #[arg(long, global = true)]
    span_boundaries: bool,

    /// Only partition letters occurring at least this many times.
    #[arg(long, global = true, value_name = "MIN_COUNT")]
    coverage: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Count monograms, digraphs and trigraphs.
    Stats {
        /// Corpus files; standard input when omitted.
        inputs: Vec<PathBuf>,
        /// Also export the digraph associations of this letter.
        #[arg(long)]
        focus: Vec<char>,
    },
    /// Split the alphabet between the hands.
    Partition {
        /// Corpus files; ignored with --stats.
        inputs: Vec<PathBuf>,
        /// Directory written by `stats`.
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Place a partition on keys.
    Layout {
        partition: PathBuf,
        #[arg(long, default_value = "optimized")]
        name: String,
    },
    /// Score one or more layouts against a corpus.
    Evaluate {
        #[arg(required = true)]
        layouts: Vec<PathBuf>,
        /// Corpus files; standard input when omitted.
        #[arg(long)]
        corpus: Vec<PathBuf>,
    },
    /// Print a comparison table of report files.
    Compare {
        #[arg(required = true)]
        reports: Vec<PathBuf>,
    },
    /// Run every stage and compare against optional baseline layouts.
    RunAll {
        inputs: Vec<PathBuf>,
        #[arg(long)]
        baseline: Vec<PathBuf>,
    },
}

fn resolve(global: &GlobalArgs) -> Result<(Pipeline, PipelineConfig), Error> {
    let mut config = match &global.config {
        Some(p) => PipelineConfig::load(p)?,
        None => PipelineConfig::default(),
    };
    if global.alphabet.is_some() {
        config.alphabet = global.alphabet.clone();
    }
    if global.geometry.is_some() {
        config.geometry = global.geometry.clone();
    }
    if global.out.is_some() {
        config.out = global.out.clone();
    }
    if global.coverage.is_some() {
        config.coverage = global.coverage;
    }
    config.balance_tiebreak |= global.balance_tiebreak;
    config.reset_on_boundary |= global.reset_on_boundary;
    config.span_boundaries |= global.span_boundaries;
    Ok((Pipeline::from_config(&config)?, config))
}

fn ingest(p: &Pipeline, inputs: &[PathBuf]) -> Result<LetterStream, Error> {
    if inputs.is_empty() {
        p.ingest_stdin()
    } else {
        p.ingest(inputs)
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let (p, config) = resolve(&cli.global)?;
    let out = config.out.clone().unwrap_or_else(|| PathBuf::from("."));
    match cli.command {
        Command::Stats { inputs, focus } => {
            let stream = ingest(&p, &inputs)?;
            let stats = p.stats(&stream)?;
            p.write_stats(&stats, &out, &focus)?;
            println!(
                "{} letters, {} distinct, {} words",
                stats.summary.total_letters, stats.summary.distinct_letters, stats.summary.words
            );
        }
        Command::Partition { inputs, stats } => {
            let (mono, di) = match stats {
                Some(dir) => p.read_stats(&dir)?,
                None => {
                    let s = p.stats(&ingest(&p, &inputs)?)?;
                    (s.mono, s.di)
                }
            };
            let partition = p.partition(&mono, &di)?;
            let path = p.write_partition(&partition, mono.total_letters(), &out)?;
            println!(
                "left {} letters, right {} letters -> {}",
                partition.left().len(),
                partition.right().len(),
                path.display()
            );
        }
        Command::Layout { partition, name } => {
            let hp = Pipeline::read_partition(&partition)?;
            let layout = p.layout(&hp, &name)?;
            let path = p.write_layout(&layout, &out)?;
            println!("{} keys -> {}", layout.len(), path.display());
        }
        Command::Evaluate { layouts, corpus } => {
            let layouts = layouts
                .iter()
                .map(|l| layout::load_layout(l))
                .collect::<Result<Vec<_>, _>>()?;
            let stream = ingest(&p, &corpus)?;
            let reports = p.evaluate(&layouts, &stream);
            p.write_reports(&reports, &out)?;
            print!("{}", evaluator::reports_to_tsv(&reports));
        }
        Command::Compare { reports } => {
            let reports = pipeline::read_reports(&reports)?;
            let table = evaluator::compare(&reports)?.render();
            if config.out.is_some() {
                std::fs::create_dir_all(&out).map_err(|e| Error::Io { path: out.clone(), source: e })?;
                let path = out.join(pipeline::COMPARISON_FILE);
                std::fs::write(&path, &table).map_err(|e| Error::Io { path, source: e })?;
            }
            print!("{table}");
        }
        Command::RunAll { inputs, baseline } => {
            if inputs.is_empty() {
                return Err(Error::EmptyInput);
            }
            print!("{}", p.run_all(&inputs, &baseline, &out)?);
        }
    }
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::AlreadyAssigned(_) | Error::InvalidOrder(_) | Error::NoInvolvement(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            eprintln!(
                "{}",
                serde_json::json!({"error": e.kind(), "message": e.to_string()})
            );
            ExitCode::from(exit_code(&e))
        }
    }
}
