//! TOML run configuration.
//!
//! ```toml
//! [corpus]
//! path = "corpus.csv"          # required
//! format = "csv"               # csv | jsonl; default from the extension
//!
//! [prep]
//! stopwords = "stop.txt"       # default: shipped English list
//! noninformative = "noise.txt" # default: shipped list
//!
//! [lexicons]
//! paths = ["sentiment.csv"]    # default: none
//!
//! [sampling]                   # optional; omitted = use every document
//! key = "sector"               # only sector strata are supported
//! n = 24                       # documents per stratum
//! seed = 7                     # required when sampling
//! merges = [{ from = ["Others", "Private"], into = "Mixed" }]
//! restrict = ["Health", "HigherEd", "Mixed"]
//!
//! [network]
//! window = "document"          # document | sentence | fixed:<k>
//! resolution = 1.0
//! seed = 0                     # default: the sampling seed, else 0
//! centrality = "weighted"      # weighted | binary
//! top_k = 5
//! keep_isolated = false
//! formats = ["graphml", "dot", "json"]
//!
//! [similarity]
//! min_count = 10               # keep terms occurring more than this
//! linkage = "average"          # average | complete | single
//! group_by = "sector"          # sector | document
//!
//! [output]
//! dir = "out"                  # default: "out"
//! ```
//!
//! Relative paths are resolved against the config file's directory.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use crate::corpus::{Format, Sector};
use crate::error::{Error, Result};
use crate::semnet::{CentralityMode, GraphFormat, Window};
use crate::simclust::Linkage;

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    corpus: Option<RawCorpus>,
    #[serde(default)]
    prep: RawPrep,
    #[serde(default)]
    lexicons: RawLexicons,
    sampling: Option<RawSampling>,
    #[serde(default)]
    network: RawNetwork,
    #[serde(default)]
    similarity: RawSimilarity,
    #[serde(default)]
    output: RawOutput,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCorpus {
    path: Option<String>,
    format: Option<String>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawPrep {
    stopwords: Option<String>,
    noninformative: Option<String>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawLexicons {
    #[serde(default)]
    paths: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMerge {
    from: Vec<String>,
    into: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSampling {
    key: Option<String>,
    n: Option<usize>,
    seed: Option<u64>,
    #[serde(default)]
    merges: Vec<RawMerge>,
    restrict: Option<Vec<String>>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawNetwork {
    window: Option<String>,
    resolution: Option<f64>,
    seed: Option<u64>,
    centrality: Option<String>,
    top_k: Option<usize>,
    keep_isolated: Option<bool>,
    formats: Option<Vec<String>>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawSimilarity {
    min_count: Option<u64>,
    linkage: Option<String>,
    group_by: Option<String>,
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MergeSpec {
    pub from: Vec<Sector>,
    pub into: Sector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplingSpec {
    pub n: usize,
    pub seed: u64,
    pub merges: Vec<MergeSpec>,
    pub restrict: Option<Vec<Sector>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetworkSpec {
    pub window: Window,
    pub resolution: f64,
    pub seed: u64,
    pub centrality: CentralityMode,
    pub top_k: usize,
    pub keep_isolated: bool,
    pub formats: Vec<GraphFormat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimilarityGrouping {
    Sector,
    Document,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimilaritySpec {
    pub min_count: u64,
    pub linkage: Linkage,
    pub group_by: SimilarityGrouping,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Directory relative paths were resolved against.
    pub base_dir: PathBuf,
    pub corpus_path: PathBuf,
    pub corpus_format: Format,
    pub stopwords: Option<PathBuf>,
    pub noninformative: Option<PathBuf>,
    pub lexicons: Vec<PathBuf>,
    pub sampling: Option<SamplingSpec>,
    pub network: NetworkSpec,
    pub similarity: SimilaritySpec,
    pub output_dir: PathBuf,
    /// SHA-256 of the config file bytes, hex.
    pub config_sha256: String,
}

fn cfg_err(location: &str, message: impl Into<String>) -> Error {
    Error::Config {
        location: location.to_string(),
        message: message.into(),
    }
}

fn parse_field<T: FromStr<Err = Error>>(location: &str, value: &str) -> Result<T> {
    value.parse().map_err(|e: Error| cfg_err(location, e.to_string()))
}

fn existing(base: &Path, location: &str, value: &str) -> Result<PathBuf> {
    let p = base.join(value);
    if !p.is_file() {
        return Err(cfg_err(location, format!("file {} does not exist", p.display())));
    }
    Ok(p)
}

impl RunConfig {
    /// Read, check and default-fill a config file.
    pub fn load(path: impl AsRef<Path>) -> Result<RunConfig> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        let text = String::from_utf8(bytes.clone())
            .map_err(|_| cfg_err(&path.display().to_string(), "config is not UTF-8"))?;
        let base = path.parent().unwrap_or(Path::new(""));
        let mut cfg = RunConfig::parse(&text, base)?;
        cfg.config_sha256 = crate::pipeline::sha256_hex(&bytes);
        Ok(cfg)
    }

    /// Parse config text, resolving paths against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<RunConfig> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| cfg_err("<toml>", e.to_string().trim_end().to_string()))?;

        let corpus = raw
            .corpus
            .ok_or_else(|| cfg_err("corpus", "missing [corpus] section"))?;
        let corpus_rel = corpus
            .path
            .ok_or_else(|| cfg_err("corpus.path", "missing corpus path"))?;
        let corpus_path = existing(base, "corpus.path", &corpus_rel)?;
        let corpus_format = match corpus.format.as_deref() {
            None => Format::from_path(&corpus_path),
            Some(f) => match f.to_ascii_lowercase().as_str() {
                "csv" => Format::Csv,
                "jsonl" => Format::Jsonl,
                other => return Err(cfg_err("corpus.format", format!("unknown format {other:?}"))),
            },
        };

        let stopwords = raw
            .prep
            .stopwords
            .map(|p| existing(base, "prep.stopwords", &p))
            .transpose()?;
        let noninformative = raw
            .prep
            .noninformative
            .map(|p| existing(base, "prep.noninformative", &p))
            .transpose()?;
        let lexicons = raw
            .lexicons
            .paths
            .iter()
            .enumerate()
            .map(|(i, p)| existing(base, &format!("lexicons.paths[{i}]"), p))
            .collect::<Result<Vec<_>>>()?;

        let sampling = raw.sampling.map(parse_sampling).transpose()?;

        let net = raw.network;
        let window = match net.window {
            Some(w) => parse_field("network.window", &w)?,
            None => Window::Document,
        };
        let resolution = net.resolution.unwrap_or(1.0);
        if resolution.is_nan() || resolution <= 0.0 || !resolution.is_finite() {
            return Err(cfg_err("network.resolution", "must be a positive number"));
        }
        let centrality = match net.centrality {
            Some(c) => parse_field("network.centrality", &c)?,
            None => CentralityMode::Weighted,
        };
        let top_k = net.top_k.unwrap_or(5);
        if top_k == 0 {
            return Err(cfg_err("network.top_k", "must be at least 1"));
        }
        let formats = match net.formats {
            Some(fs) => {
                if fs.is_empty() {
                    return Err(cfg_err("network.formats", "list at least one format"));
                }
                let mut out: Vec<GraphFormat> = Vec::new();
                for (i, f) in fs.iter().enumerate() {
                    let g: GraphFormat = parse_field(&format!("network.formats[{i}]"), f)?;
                    if !out.contains(&g) {
                        out.push(g);
                    }
                }
                out
            }
            None => vec![GraphFormat::GraphMl, GraphFormat::Dot, GraphFormat::JsonEdgeList],
        };
        let network = NetworkSpec {
            window,
            resolution,
            seed: net.seed.unwrap_or_else(|| sampling.as_ref().map_or(0, |s| s.seed)),
            centrality,
            top_k,
            keep_isolated: net.keep_isolated.unwrap_or(false),
            formats,
        };

        let sim = raw.similarity;
        let similarity = SimilaritySpec {
            min_count: sim.min_count.unwrap_or(10),
            linkage: match sim.linkage {
                Some(l) => parse_field("similarity.linkage", &l)?,
                None => Linkage::Average,
            },
            group_by: match sim.group_by.as_deref().map(str::to_ascii_lowercase).as_deref() {
                None | Some("sector") => SimilarityGrouping::Sector,
                Some("document") | Some("none") => SimilarityGrouping::Document,
                Some(other) => {
                    return Err(cfg_err(
                        "similarity.group_by",
                        format!("expected sector or document, got {other:?}"),
                    ))
                }
            },
        };

        Ok(RunConfig {
            base_dir: base.to_path_buf(),
            corpus_path,
            corpus_format,
            stopwords,
            noninformative,
            lexicons,
            sampling,
            network,
            similarity,
            output_dir: base.join(raw.output.dir.as_deref().unwrap_or("out")),
            config_sha256: crate::pipeline::sha256_hex(text.as_bytes()),
        })
    }

    /// Replace the sampling seed (and the network seed when it was derived
    /// from it).
    pub fn override_seed(&mut self, seed: u64, network_seed_explicit: bool) {
        if let Some(s) = &mut self.sampling {
            s.seed = seed;
        }
        if !network_seed_explicit {
            self.network.seed = seed;
        }
    }
}

fn parse_sampling(raw: RawSampling) -> Result<SamplingSpec> {
    if let Some(k) = raw.key {
        if !k.eq_ignore_ascii_case("sector") {
            return Err(cfg_err(
                "sampling.key",
                format!("only sector strata are supported, got {k:?}"),
            ));
        }
    }
    let n = raw
        .n
        .ok_or_else(|| cfg_err("sampling.n", "missing per-stratum sample size"))?;
    if n == 0 {
        return Err(cfg_err("sampling.n", "must be at least 1"));
    }
    let seed = raw
        .seed
        .ok_or_else(|| cfg_err("sampling.seed", "a seed is required when sampling"))?;
    let merges = raw
        .merges
        .into_iter()
        .enumerate()
        .map(|(i, m)| {
            let from = m
                .from
                .iter()
                .map(|s| parse_field(&format!("sampling.merges[{i}].from"), s))
                .collect::<Result<Vec<Sector>>>()?;
            let into = parse_field(&format!("sampling.merges[{i}].into"), &m.into)?;
            Ok(MergeSpec { from, into })
        })
        .collect::<Result<Vec<_>>>()?;
    let restrict = raw
        .restrict
        .map(|r| {
            r.iter()
                .map(|s| parse_field("sampling.restrict", s))
                .collect::<Result<Vec<Sector>>>()
        })
        .transpose()?;
    Ok(SamplingSpec {
        n,
        seed,
        merges,
        restrict,
    })
}

/// True when the config text sets `[network] seed` itself.
pub fn network_seed_explicit(text: &str) -> bool {
    toml::from_str::<RawConfig>(text)
        .map(|r| r.network.seed.is_some())
        .unwrap_or(false)
}
