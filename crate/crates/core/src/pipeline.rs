//! Stage orchestration, artifact writing and the run manifest.
//!
//! Metrics, tagging and the report always use the full corpus. The network
//! and similarity stages use the sampled corpus when `[sampling]` is set, and
//! the sample itself is written to `sample.csv`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{RunConfig, SamplingSpec, SimilarityGrouping};
use crate::corpus::{self, load_corpus, merge_strata, stratified_sample, Corpus};
use crate::error::{Error, Result};
use crate::lexicons::{load_lexicon, tag_corpus, Lexicon};
use crate::report::{
    aggregate, averages_text, correlations, correlations_text, metrics_rows, read_metrics_csv, write_averages_csv,
    write_correlations_csv, write_metrics_csv, MetricsRow,
};
use crate::semnet::{betweenness, build_cooccurrence, louvain, top_terms, write_graph, CooccurrenceConfig};
use crate::simclust::{build_dfm, group_rows, hac, similarity_matrix};
use crate::textprep::{prepare, PrepConfig, TokenStream};

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Metrics,
    Tag,
    Network,
    Similarity,
    Report,
}

impl Stage {
    pub const ALL: [Stage; 5] = [
        Stage::Metrics,
        Stage::Tag,
        Stage::Network,
        Stage::Similarity,
        Stage::Report,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Metrics => "metrics",
            Stage::Tag => "tag",
            Stage::Network => "network",
            Stage::Similarity => "similarity",
            Stage::Report => "report",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Stage::ALL
            .into_iter()
            .find(|st| st.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::invalid(format!("unknown stage {s:?}")))
    }
}

/// Parse a comma-separated stage list.
pub fn parse_stages(list: &str) -> Result<Vec<Stage>> {
    let mut out = Vec::new();
    for part in list.split(',').filter(|p| !p.trim().is_empty()) {
        let s: Stage = part.parse()?;
        if !out.contains(&s) {
            out.push(s);
        }
    }
    if out.is_empty() {
        return Err(Error::invalid("no stages given"));
    }
    Ok(out)
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// `None` runs every stage (tagging only when lexicons are configured).
    pub stages: Option<Vec<Stage>>,
    /// Show `,` as the decimal separator in `.txt` tables.
    pub comma_decimal: bool,
    /// Command-line overrides, recorded in the manifest.
    pub overrides: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FileRecord {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Artifact {
    pub stage: String,
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Seeds {
    pub sampling: Option<u64>,
    pub network: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Manifest {
    pub config_sha256: String,
    pub overrides: BTreeMap<String, String>,
    pub stages: Vec<String>,
    pub inputs: Vec<FileRecord>,
    pub seeds: Seeds,
    pub artifacts: Vec<Artifact>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_stage: Option<String>,
}

impl Manifest {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }
}

/// Corpus, word lists and lexicons named by a config.
pub struct Inputs {
    pub corpus: Corpus,
    pub prep: PrepConfig,
    pub lexicons: Vec<Lexicon>,
}

pub fn load_inputs(cfg: &RunConfig) -> Result<Inputs> {
    Ok(Inputs {
        corpus: load_corpus(&cfg.corpus_path, cfg.corpus_format)?,
        prep: PrepConfig::from_files(cfg.stopwords.as_deref(), cfg.noninformative.as_deref())?,
        lexicons: cfg.lexicons.iter().map(load_lexicon).collect::<Result<Vec<_>>>()?,
    })
}

/// Apply merges, then the sector restriction, then draw the stratified sample.
pub fn sample_corpus(corpus: &Corpus, spec: &SamplingSpec) -> Result<Corpus> {
    let mut c = corpus.clone();
    for m in &spec.merges {
        c = merge_strata(&c, &m.from, m.into)?;
    }
    if let Some(keep) = &spec.restrict {
        c = c.restrict_sectors(keep)?;
    }
    stratified_sample(&c, spec.n, spec.seed)
}

fn relative(path: &Path, base: &Path) -> String {
    let p = path.strip_prefix(base).unwrap_or(path);
    p.components()
        .map(|c| c.as_os_str().to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join("/")
}

struct Writer<'a> {
    dir: &'a Path,
    artifacts: Vec<Artifact>,
}

impl Writer<'_> {
    fn write(&mut self, stage: Stage, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
        self.artifacts.push(Artifact {
            stage: stage.name().to_string(),
            path: name.to_string(),
            sha256: sha256_hex(bytes),
        });
        Ok(())
    }
}

fn csv_bytes(f: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(buf)
}

struct Run<'a> {
    cfg: &'a RunConfig,
    inputs: Inputs,
    comma: bool,
    sample: Option<Corpus>,
    metrics: Option<Vec<MetricsRow>>,
}

impl Run<'_> {
    fn sampled(&mut self, out: &mut Writer, stage: Stage) -> Result<Corpus> {
        if let Some(s) = &self.sample {
            return Ok(s.clone());
        }
        let s = match &self.cfg.sampling {
            Some(spec) => {
                let s = sample_corpus(&self.inputs.corpus, spec)?;
                let bytes = csv_bytes(|b| corpus::write_csv(&s, b))?;
                out.write(stage, "sample.csv", &bytes)?;
                s
            }
            None => self.inputs.corpus.clone(),
        };
        self.sample = Some(s.clone());
        Ok(s)
    }

    fn streams(&self, corpus: &Corpus) -> Vec<TokenStream> {
        use rayon::prelude::*;
        corpus
            .documents()
            .par_iter()
            .map(|d| prepare(&d.text, &self.inputs.prep))
            .collect()
    }

    fn stage(&mut self, stage: Stage, out: &mut Writer) -> Result<()> {
        match stage {
            Stage::Metrics => {
                let rows = metrics_rows(&self.inputs.corpus, &self.inputs.lexicons)?;
                out.write(stage, "metrics.csv", &csv_bytes(|b| write_metrics_csv(&rows, b))?)?;
                self.metrics = Some(rows);
            }
            Stage::Tag => {
                if self.inputs.lexicons.is_empty() {
                    return Err(Error::Config {
                        location: "lexicons.paths".into(),
                        message: "the tag stage needs at least one lexicon".into(),
                    });
                }
                let tags = tag_corpus(&self.inputs.corpus, &self.inputs.lexicons)?;
                let bytes = csv_bytes(|b| {
                    let mut w = csv::Writer::from_writer(b);
                    w.write_record(["doc_id", "lexicon", "category", "count", "ratio"])?;
                    for t in &tags {
                        for (cat, count) in &t.counts {
                            w.write_record([
                                t.doc_id.as_str(),
                                t.lexicon.as_str(),
                                cat.as_str(),
                                &count.to_string(),
                                &t.ratios[cat].to_string(),
                            ])?;
                        }
                    }
                    w.flush().map_err(|e| Error::io("tags.csv", e))
                })?;
                out.write(stage, "tags.csv", &bytes)?;
            }
            Stage::Network => self.network(out)?,
            Stage::Similarity => self.similarity(out)?,
            Stage::Report => self.report(out)?,
        }
        Ok(())
    }

    fn network(&mut self, out: &mut Writer) -> Result<()> {
        let stage = Stage::Network;
        let spec = &self.cfg.network;
        let corpus = self.sampled(out, stage)?;
        let streams = self.streams(&corpus);
        let graph = build_cooccurrence(
            &streams,
            CooccurrenceConfig {
                window: spec.window,
                keep_isolated: spec.keep_isolated,
            },
        );
        if graph.is_empty() {
            return Err(Error::invalid("the co-occurrence graph is empty"));
        }
        let communities = louvain(&graph, spec.resolution, spec.seed)?;
        let centrality = betweenness(&graph, spec.centrality);
        for &f in &spec.formats {
            let text = write_graph(&graph, &communities, &centrality, f)?;
            out.write(stage, &format!("network.{}", f.extension()), text.as_bytes())?;
        }

        let nodes = csv_bytes(|b| {
            let mut w = csv::Writer::from_writer(b);
            w.write_record(["id", "term", "freq", "community", "betweenness"])?;
            for (i, n) in graph.nodes().iter().enumerate() {
                w.write_record([
                    i.to_string(),
                    n.term.clone(),
                    n.freq.to_string(),
                    communities.membership[i].to_string(),
                    centrality.scores[i].to_string(),
                ])?;
            }
            w.flush().map_err(|e| Error::io("communities.csv", e))
        })?;
        out.write(stage, "communities.csv", &nodes)?;

        let top = top_terms(&graph, &communities, &centrality, spec.top_k)?;
        let tops = csv_bytes(|b| {
            let mut w = csv::Writer::from_writer(b);
            w.write_record(["scope", "rank", "term", "betweenness", "freq"])?;
            let scopes = std::iter::once(("global".to_string(), &top.global)).chain(
                top.per_community
                    .iter()
                    .enumerate()
                    .map(|(c, l)| (format!("community {c}"), l)),
            );
            for (scope, list) in scopes {
                for (rank, t) in list.iter().enumerate() {
                    w.write_record([
                        scope.clone(),
                        (rank + 1).to_string(),
                        t.term.clone(),
                        t.betweenness.to_string(),
                        t.freq.to_string(),
                    ])?;
                }
            }
            w.flush().map_err(|e| Error::io("top_terms.csv", e))
        })?;
        out.write(stage, "top_terms.csv", &tops)?;

        let summary = serde_json::json!({
            "documents": corpus.len(),
            "nodes": graph.node_count(),
            "edges": graph.edge_count(),
            "communities": communities.community_count(),
            "modularity": communities.modularity_q,
            "pass_modularity": communities.pass_modularity,
            "resolution": spec.resolution,
            "seed": spec.seed,
            "window": spec.window.to_string(),
            "centrality": format!("{:?}", spec.centrality).to_lowercase(),
        });
        let mut text = serde_json::to_string_pretty(&summary)?;
        text.push('\n');
        out.write(stage, "network_summary.json", text.as_bytes())
    }

    fn similarity(&mut self, out: &mut Writer) -> Result<()> {
        let stage = Stage::Similarity;
        let spec = &self.cfg.similarity;
        let corpus = self.sampled(out, stage)?;
        let streams = self.streams(&corpus);
        let dfm = build_dfm(corpus.iter().map(|d| d.id.as_str()).zip(streams.iter()), spec.min_count)?;
        out.write(stage, "dfm.csv", &csv_bytes(|b| dfm.write_csv(b))?)?;
        let rows = match spec.group_by {
            SimilarityGrouping::Document => dfm,
            SimilarityGrouping::Sector => {
                let grouping: HashMap<String, String> =
                    corpus.iter().map(|d| (d.id.clone(), d.sector.to_string())).collect();
                let grouped = group_rows(&dfm, &grouping)?;
                out.write(stage, "dfm_grouped.csv", &csv_bytes(|b| grouped.write_csv(b))?)?;
                grouped
            }
        };
        let sim = similarity_matrix(&rows)?;
        out.write(stage, "similarity.csv", &csv_bytes(|b| sim.write_csv(b))?)?;
        let tree = hac(&sim, spec.linkage)?;
        out.write(stage, "dendrogram.nwk", format!("{}\n", tree.to_newick()).as_bytes())?;
        out.write(stage, "dendrogram.json", tree.to_json()?.as_bytes())
    }

    fn report(&mut self, out: &mut Writer) -> Result<()> {
        let stage = Stage::Report;
        let rows = match self.metrics.take() {
            Some(r) => r,
            None => {
                let prior = self.cfg.output_dir.join("metrics.csv");
                if prior.is_file() {
                    let f = fs::File::open(&prior).map_err(|e| Error::io(&prior, e))?;
                    read_metrics_csv(f)?
                } else {
                    metrics_rows(&self.inputs.corpus, &self.inputs.lexicons)?
                }
            }
        };
        let corpus = &self.inputs.corpus;
        let table = aggregate(&rows, corpus)?;
        out.write(stage, "averages.csv", &csv_bytes(|b| write_averages_csv(&table, b))?)?;
        out.write(stage, "averages.txt", averages_text(&table, self.comma).as_bytes())?;

        let mut matrices = vec![correlations(&rows, corpus, None)?];
        let mut skipped = Vec::new();
        for sector in corpus.sectors() {
            let n = corpus.iter().filter(|d| d.sector == sector).count();
            if n >= 3 {
                matrices.push(correlations(&rows, corpus, Some(sector))?);
            } else {
                skipped.push(format!("{sector} (n = {n})"));
            }
        }
        out.write(
            stage,
            "correlations.csv",
            &csv_bytes(|b| write_correlations_csv(&matrices, b))?,
        )?;
        let mut text = String::new();
        for m in &matrices {
            text.push_str(&correlations_text(m, self.comma));
            text.push('\n');
        }
        text.push_str("* p <= .05, ** p <= .01, *** p <= .001; NA = constant variable\n");
        if !skipped.is_empty() {
            text.push_str(&format!(
                "fewer than 3 documents, not correlated: {}\n",
                skipped.join(", ")
            ));
        }
        self.metrics = Some(rows);
        out.write(stage, "correlations.txt", text.as_bytes())
    }
}

/// Run the requested stages in canonical order and write `manifest.json`.
///
/// A failing stage stops the run. Files already written stay in place and
/// the manifest records them along with the failed stage's name.
pub fn run(cfg: &RunConfig, opts: &RunOptions) -> Result<Manifest> {
    let inputs = load_inputs(cfg)?;
    let mut stages: Vec<Stage> = match &opts.stages {
        Some(s) => s.clone(),
        None => Stage::ALL
            .into_iter()
            .filter(|&s| s != Stage::Tag || !inputs.lexicons.is_empty())
            .collect(),
    };
    stages.sort();
    stages.dedup();

    fs::create_dir_all(&cfg.output_dir).map_err(|e| Error::io(&cfg.output_dir, e))?;

    let mut input_paths: Vec<&PathBuf> = vec![&cfg.corpus_path];
    input_paths.extend(cfg.stopwords.iter());
    input_paths.extend(cfg.noninformative.iter());
    input_paths.extend(cfg.lexicons.iter());
    let inputs_rec = input_paths
        .into_iter()
        .map(|p| {
            let bytes = fs::read(p).map_err(|e| Error::io(p, e))?;
            Ok(FileRecord {
                path: relative(p, &cfg.base_dir),
                sha256: sha256_hex(&bytes),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut manifest = Manifest {
        config_sha256: cfg.config_sha256.clone(),
        overrides: opts.overrides.clone(),
        stages: stages.iter().map(|s| s.name().to_string()).collect(),
        inputs: inputs_rec,
        seeds: Seeds {
            sampling: cfg.sampling.as_ref().map(|s| s.seed),
            network: cfg.network.seed,
        },
        artifacts: Vec::new(),
        failed_stage: None,
    };

    let mut out = Writer {
        dir: &cfg.output_dir,
        artifacts: Vec::new(),
    };
    let mut state = Run {
        cfg,
        inputs,
        comma: opts.comma_decimal,
        sample: None,
        metrics: None,
    };
    let mut failure = None;
    for &stage in &stages {
        if let Err(e) = state.stage(stage, &mut out) {
            manifest.failed_stage = Some(stage.name().to_string());
            failure = Some(Error::Stage {
                stage: stage.name().to_string(),
                source: Box::new(e),
            });
            break;
        }
    }
    manifest.artifacts = out.artifacts;
    let path = cfg.output_dir.join("manifest.json");
    fs::write(&path, manifest.to_json()).map_err(|e| Error::io(&path, e))?;
    match failure {
        Some(e) => Err(e),
        None => Ok(manifest),
    }
}
