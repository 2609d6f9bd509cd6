use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mission_content::config::{network_seed_explicit, RunConfig};
use mission_content::corpus::{self, group_counts, load_corpus, Format, GroupKey};
use mission_content::pipeline::{self, parse_stages, sample_corpus, RunOptions, Stage};
use mission_content::{Error, Result};

#[derive(Parser)]
#[command(name = "mission-content", version, about = "Mission statement content analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Run configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Override the sampling seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override [output] dir.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Show a comma decimal separator in .txt tables.
    #[arg(long)]
    locale_display: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Load and validate a corpus file.
    Ingest {
        /// Corpus file; defaults to the config's corpus.
        path: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// csv or jsonl; default from the extension.
        #[arg(long)]
        format: Option<String>,
        /// Print document counts per sector, continent and sector x continent.
        #[arg(long)]
        counts: bool,
    },
    /// Draw the configured stratified sample and write sample.csv.
    Sample(Common),
    /// Readability and lexical diversity per document (metrics.csv).
    Metrics(Common),
    /// Lexicon category counts and ratios per document (tags.csv).
    Tag(Common),
    /// Co-occurrence network, communities and central terms.
    Network(Common),
    /// Document-feature matrix, cosine similarity and dendrogram.
    Similarity(Common),
    /// Stratum averages and correlation tables.
    Report(Common),
    /// Run several stages (default: all).
    Run {
        #[command(flatten)]
        common: Common,
        /// Comma-separated subset of metrics,tag,network,similarity,report.
        #[arg(long)]
        stages: Option<String>,
    },
}

fn load_config(c: &Common) -> Result<(RunConfig, BTreeMap<String, String>)> {
    let mut cfg = RunConfig::load(&c.config)?;
    let mut overrides = BTreeMap::new();
    if let Some(seed) = c.seed {
        if cfg.sampling.is_none() {
            return Err(Error::Config {
                location: "--seed".into(),
                message: "the config has no [sampling] section to override".into(),
            });
        }
        let text = std::fs::read_to_string(&c.config).map_err(|e| Error::Io {
            path: c.config.clone(),
            source: e,
        })?;
        cfg.override_seed(seed, network_seed_explicit(&text));
        overrides.insert("seed".into(), seed.to_string());
    }
    if let Some(dir) = &c.out_dir {
        cfg.output_dir = dir.clone();
        overrides.insert("out_dir".into(), dir.display().to_string());
    }
    if c.locale_display {
        overrides.insert("locale_display".into(), "true".into());
    }
    Ok((cfg, overrides))
}

fn run_stages(c: &Common, stages: Option<Vec<Stage>>) -> Result<()> {
    let (cfg, overrides) = load_config(c)?;
    let manifest = pipeline::run(
        &cfg,
        &RunOptions {
            stages,
            comma_decimal: c.locale_display,
            overrides,
        },
    )?;
    for a in &manifest.artifacts {
        println!("{}  {}", a.sha256, cfg.output_dir.join(&a.path).display());
    }
    Ok(())
}

fn execute(cmd: Command) -> Result<()> {
    match cmd {
        Command::Ingest {
            path,
            config,
            format,
            counts,
        } => {
            let (path, fmt) = match (path, config) {
                (Some(p), _) => {
                    let f = match format.as_deref() {
                        Some("csv") => Format::Csv,
                        Some("jsonl") => Format::Jsonl,
                        Some(other) => return Err(Error::InvalidInput(format!("unknown format {other:?}"))),
                        None => Format::from_path(&p),
                    };
                    (p, f)
                }
                (None, Some(c)) => {
                    let cfg = RunConfig::load(c)?;
                    (cfg.corpus_path, cfg.corpus_format)
                }
                (None, None) => {
                    return Err(Error::Config {
                        location: "ingest".into(),
                        message: "give a corpus path or --config".into(),
                    })
                }
            };
            let corpus = load_corpus(&path, fmt)?;
            println!("{}: {} documents", path.display(), corpus.len());
            if counts {
                for key in [GroupKey::Sector, GroupKey::Continent, GroupKey::SectorContinent] {
                    for g in group_counts(&corpus, key)? {
                        println!("{}\t{}\t{:.2}%", g.group, g.count, g.percent);
                    }
                    println!();
                }
            }
            Ok(())
        }
        Command::Sample(c) => {
            let (cfg, _) = load_config(&c)?;
            let spec = cfg.sampling.as_ref().ok_or_else(|| Error::Config {
                location: "sampling".into(),
                message: "missing [sampling] section".into(),
            })?;
            let corpus = load_corpus(&cfg.corpus_path, cfg.corpus_format)?;
            let sample = sample_corpus(&corpus, spec)?;
            std::fs::create_dir_all(&cfg.output_dir).map_err(|e| Error::Io {
                path: cfg.output_dir.clone(),
                source: e,
            })?;
            let out = cfg.output_dir.join("sample.csv");
            corpus::save_corpus(&sample, &out, Format::Csv)?;
            println!("{} documents -> {}", sample.len(), out.display());
            Ok(())
        }
        Command::Metrics(c) => run_stages(&c, Some(vec![Stage::Metrics])),
        Command::Tag(c) => run_stages(&c, Some(vec![Stage::Tag])),
        Command::Network(c) => run_stages(&c, Some(vec![Stage::Network])),
        Command::Similarity(c) => run_stages(&c, Some(vec![Stage::Similarity])),
        Command::Report(c) => run_stages(&c, Some(vec![Stage::Report])),
        Command::Run { common, stages } => {
            let stages = stages
                .as_deref()
                .map(parse_stages)
                .transpose()
                .map_err(|e| Error::Config {
                    location: "--stages".into(),
                    message: e.to_string(),
                })?;
            run_stages(&common, stages)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.kind().exit_code() as u8)
        }
    }
}
