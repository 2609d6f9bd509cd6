//! Mission corpus: loading, persistence, stratum counts, merging and sampling.
//!
//! Files are either RFC-4180 CSV with a header row or JSON Lines. Both carry
//! the keys `id`, `institution`, `sector`, `continent`, `text` and an optional
//! `country`. Sector and continent labels are matched case-insensitively;
//! `LATAM-CAR` maps to [`Continent::LatamCar`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sector {
    Government,
    Health,
    HigherEd,
    Others,
    Private,
    Mixed,
}

impl Sector {
    pub const ALL: [Sector; 6] = [
        Sector::Government,
        Sector::Health,
        Sector::HigherEd,
        Sector::Others,
        Sector::Private,
        Sector::Mixed,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Sector::Government => "Government",
            Sector::Health => "Health",
            Sector::HigherEd => "HigherEd",
            Sector::Others => "Others",
            Sector::Private => "Private",
            Sector::Mixed => "Mixed",
        }
    }

    fn index(self) -> u64 {
        self as u64
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Sector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .trim()
            .chars()
            .filter(|c| c.is_alphanumeric())
            .flat_map(char::to_lowercase)
            .collect();
        Ok(match key.as_str() {
            "government" | "gov" => Sector::Government,
            "health" => Sector::Health,
            "highered" | "highereducation" => Sector::HigherEd,
            "others" | "other" => Sector::Others,
            "private" => Sector::Private,
            "mixed" => Sector::Mixed,
            _ => return Err(Error::invalid(format!("unknown sector {s:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Continent {
    Africa,
    Asia,
    Europe,
    LatamCar,
    NorthAmerica,
    Oceania,
}

impl Continent {
    pub const ALL: [Continent; 6] = [
        Continent::Africa,
        Continent::Asia,
        Continent::Europe,
        Continent::LatamCar,
        Continent::NorthAmerica,
        Continent::Oceania,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Continent::Africa => "Africa",
            Continent::Asia => "Asia",
            Continent::Europe => "Europe",
            Continent::LatamCar => "LATAM-CAR",
            Continent::NorthAmerica => "North America",
            Continent::Oceania => "Oceania",
        }
    }
}

impl fmt::Display for Continent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Continent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .trim()
            .chars()
            .filter(|c| c.is_alphanumeric())
            .flat_map(char::to_lowercase)
            .collect();
        Ok(match key.as_str() {
            "africa" => Continent::Africa,
            "asia" => Continent::Asia,
            "europe" => Continent::Europe,
            "latamcar" | "latinamericaandthecaribbean" => Continent::LatamCar,
            "northamerica" => Continent::NorthAmerica,
            "oceania" => Continent::Oceania,
            _ => return Err(Error::invalid(format!("unknown continent {s:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub institution: String,
    pub sector: Sector,
    pub continent: Continent,
    /// Stored for provenance only.
    pub country: Option<String>,
    pub text: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Jsonl,
}

impl Format {
    /// Guess from a file extension (`.jsonl`/`.json` vs anything else).
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("jsonl") || ext.eq_ignore_ascii_case("json") => Format::Jsonl,
            _ => Format::Csv,
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "jsonl" | "json" => Ok(Format::Jsonl),
            _ => Err(Error::invalid(format!("unknown corpus format {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct LoadOptions {
    /// Accept documents already labelled [`Sector::Mixed`] (e.g. a saved
    /// merged sample). Raw ingest keeps this off.
    pub allow_mixed: bool,
}

/// An ordered, immutable collection of documents with a stratum index.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Corpus {
    documents: Vec<Document>,
    strata: BTreeMap<(Sector, Continent), Vec<usize>>,
    by_id: HashMap<String, usize>,
}

impl Corpus {
    pub fn new(documents: Vec<Document>) -> Result<Self> {
        let mut seen: HashMap<&str, usize> = HashMap::new();
        for (i, d) in documents.iter().enumerate() {
            if d.id.is_empty() {
                return Err(Error::invalid(format!("document #{} has an empty id", i + 1)));
            }
            if d.text.trim().is_empty() {
                return Err(Error::invalid(format!("document {:?} has empty text", d.id)));
            }
            if let Some(prev) = seen.insert(d.id.as_str(), i) {
                return Err(Error::DuplicateId {
                    id: d.id.clone(),
                    first: prev as u64 + 1,
                    second: i as u64 + 1,
                });
            }
        }
        let mut strata: BTreeMap<(Sector, Continent), Vec<usize>> = BTreeMap::new();
        for (i, d) in documents.iter().enumerate() {
            strata.entry((d.sector, d.continent)).or_default().push(i);
        }
        let by_id = documents.iter().enumerate().map(|(i, d)| (d.id.clone(), i)).collect();
        Ok(Corpus {
            documents,
            strata,
            by_id,
        })
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Document> {
        self.documents.iter()
    }

    pub fn get(&self, id: &str) -> Option<&Document> {
        self.by_id.get(id).map(|&i| &self.documents[i])
    }

    /// Document ids in a (sector, continent) stratum, in insertion order.
    pub fn stratum_ids(&self, sector: Sector, continent: Continent) -> Vec<&str> {
        self.strata
            .get(&(sector, continent))
            .map(|ix| ix.iter().map(|&i| self.documents[i].id.as_str()).collect())
            .unwrap_or_default()
    }

    pub fn sectors(&self) -> Vec<Sector> {
        let mut s: Vec<Sector> = self.strata.keys().map(|k| k.0).collect();
        s.dedup();
        s
    }

    /// Keep only documents from the given sectors.
    pub fn restrict_sectors(&self, keep: &[Sector]) -> Result<Corpus> {
        Corpus::new(
            self.documents
                .iter()
                .filter(|d| keep.contains(&d.sector))
                .cloned()
                .collect(),
        )
    }
}

impl<'a> IntoIterator for &'a Corpus {
    type Item = &'a Document;
    type IntoIter = std::slice::Iter<'a, Document>;

    fn into_iter(self) -> Self::IntoIter {
        self.documents.iter()
    }
}

const REQUIRED: [&str; 5] = ["id", "institution", "sector", "continent", "text"];

pub fn load_corpus(path: impl AsRef<Path>, format: Format) -> Result<Corpus> {
    load_corpus_with(path, format, LoadOptions::default())
}

pub fn load_corpus_with(path: impl AsRef<Path>, format: Format, options: LoadOptions) -> Result<Corpus> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let records = match format {
        Format::Csv => read_csv(BufReader::new(file))?,
        Format::Jsonl => read_jsonl(BufReader::new(file), path)?,
    };
    build_corpus(records, options)
}

/// Parse a corpus from CSV text already in memory.
pub fn parse_csv(data: &str, options: LoadOptions) -> Result<Corpus> {
    build_corpus(read_csv(data.as_bytes())?, options)
}

struct RawRecord {
    line: u64,
    fields: [String; 5],
    country: Option<String>,
}

fn read_csv<R: std::io::Read>(reader: R) -> Result<Vec<RawRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| headers.iter().position(|h| h.trim().eq_ignore_ascii_case(name));
    let mut idx = [0usize; 5];
    for (slot, name) in idx.iter_mut().zip(REQUIRED) {
        *slot = col(name).ok_or_else(|| Error::Schema(format!("missing column {name:?}")))?;
    }
    let country_ix = col("country");

    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let get = |i: usize| rec.get(i).unwrap_or("").to_string();
        out.push(RawRecord {
            line,
            fields: idx.map(get),
            country: country_ix.map(get).filter(|c| !c.is_empty()),
        });
    }
    Ok(out)
}

fn read_jsonl<R: BufRead>(reader: R, path: &Path) -> Result<Vec<RawRecord>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i as u64 + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let value: serde_json::Value = serde_json::from_str(&line).map_err(|e| Error::Record {
            line: line_no,
            message: e.to_string(),
        })?;
        let obj = value.as_object().ok_or_else(|| Error::Record {
            line: line_no,
            message: "expected a JSON object".into(),
        })?;
        let mut fields: [String; 5] = Default::default();
        for (slot, name) in fields.iter_mut().zip(REQUIRED) {
            *slot = match obj.get(name) {
                Some(serde_json::Value::String(s)) => s.clone(),
                Some(_) => {
                    return Err(Error::Record {
                        line: line_no,
                        message: format!("key {name:?} must be a string"),
                    })
                }
                None => return Err(Error::Schema(format!("missing column {name:?} on line {line_no}"))),
            };
        }
        let country = obj
            .get("country")
            .and_then(|v| v.as_str())
            .filter(|s| !s.is_empty())
            .map(str::to_string);
        out.push(RawRecord {
            line: line_no,
            fields,
            country,
        });
    }
    Ok(out)
}

fn build_corpus(records: Vec<RawRecord>, options: LoadOptions) -> Result<Corpus> {
    let mut lines: HashMap<String, u64> = HashMap::new();
    let mut docs = Vec::with_capacity(records.len());
    for r in records {
        let [id, institution, sector, continent, text] = r.fields;
        let line = r.line;
        let fail = |message: String| Error::Record { line, message };
        let id = id.trim().to_string();
        if id.is_empty() {
            return Err(fail("empty id".into()));
        }
        if let Some(&first) = lines.get(&id) {
            return Err(Error::DuplicateId {
                id,
                first,
                second: line,
            });
        }
        let sector: Sector = sector.parse().map_err(|e: Error| fail(e.to_string()))?;
        if sector == Sector::Mixed && !options.allow_mixed {
            return Err(fail("sector Mixed is only produced by merging strata".into()));
        }
        let continent: Continent = continent.parse().map_err(|e: Error| fail(e.to_string()))?;
        if text.trim().is_empty() {
            return Err(fail(format!("document {id:?} has empty text")));
        }
        lines.insert(id.clone(), line);
        docs.push(Document {
            id,
            institution,
            sector,
            continent,
            country: r.country,
            text,
        });
    }
    Corpus::new(docs)
}

#[derive(Serialize)]
struct JsonDoc<'a> {
    id: &'a str,
    institution: &'a str,
    sector: &'a str,
    continent: &'a str,
    country: Option<&'a str>,
    text: &'a str,
}

pub fn save_corpus(corpus: &Corpus, path: impl AsRef<Path>, format: Format) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    match format {
        Format::Csv => write_csv(corpus, &mut w)?,
        Format::Jsonl => {
            for d in corpus {
                let row = JsonDoc {
                    id: &d.id,
                    institution: &d.institution,
                    sector: d.sector.label(),
                    continent: d.continent.label(),
                    country: d.country.as_deref(),
                    text: &d.text,
                };
                serde_json::to_writer(&mut w, &row)?;
                w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
            }
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_csv<W: Write>(corpus: &Corpus, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["id", "institution", "sector", "continent", "country", "text"])?;
    for d in corpus {
        w.write_record([
            d.id.as_str(),
            &d.institution,
            d.sector.label(),
            d.continent.label(),
            d.country.as_deref().unwrap_or(""),
            &d.text,
        ])?;
    }
    w.flush().map_err(|e| Error::io("<csv writer>", e))?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKey {
    Sector,
    Continent,
    SectorContinent,
}

impl FromStr for GroupKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "sector" => Ok(GroupKey::Sector),
            "continent" => Ok(GroupKey::Continent),
            "sector_x_continent" | "sector_continent" => Ok(GroupKey::SectorContinent),
            _ => Err(Error::invalid(format!("unknown grouping key {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Group {
    Sector(Sector),
    Continent(Continent),
    SectorContinent(Sector, Continent),
}

impl Group {
    pub fn of(doc: &Document, key: GroupKey) -> Group {
        match key {
            GroupKey::Sector => Group::Sector(doc.sector),
            GroupKey::Continent => Group::Continent(doc.continent),
            GroupKey::SectorContinent => Group::SectorContinent(doc.sector, doc.continent),
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::Sector(s) => write!(f, "{s}"),
            Group::Continent(c) => write!(f, "{c}"),
            Group::SectorContinent(s, c) => write!(f, "{s}/{c}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupCount {
    pub group: Group,
    pub count: usize,
    /// Percentage of the corpus in two decimals; the column sums to 100.
    pub percent: f64,
}

/// Document counts per group, in group order.
pub fn group_counts(corpus: &Corpus, key: GroupKey) -> Result<Vec<GroupCount>> {
    if corpus.is_empty() {
        return Err(Error::invalid("cannot count groups of an empty corpus"));
    }
    let mut counts: BTreeMap<Group, usize> = BTreeMap::new();
    for d in corpus {
        *counts.entry(Group::of(d, key)).or_default() += 1;
    }
    // Largest-remainder rounding in hundredths, so the rounded shares add up
    // to exactly 100.00 however many groups there are.
    let total = corpus.len() as u64;
    let mut hundredths: Vec<(u64, u64)> = counts
        .values()
        .map(|&c| {
            let scaled = c as u64 * 10_000;
            (scaled / total, scaled % total)
        })
        .collect();
    let short = 10_000 - hundredths.iter().map(|h| h.0).sum::<u64>();
    let mut order: Vec<usize> = (0..hundredths.len()).collect();
    order.sort_by(|&a, &b| hundredths[b].1.cmp(&hundredths[a].1).then(a.cmp(&b)));
    for &i in order.iter().take(short as usize) {
        hundredths[i].0 += 1;
    }
    Ok(counts
        .into_iter()
        .zip(hundredths)
        .map(|((group, count), (h, _))| GroupCount {
            group,
            count,
            percent: h as f64 / 100.0,
        })
        .collect())
}

/// Relabel documents of the `sources` sectors as `target`.
pub fn merge_strata(corpus: &Corpus, sources: &[Sector], target: Sector) -> Result<Corpus> {
    if sources.is_empty() {
        return Err(Error::invalid("merge needs at least one source sector"));
    }
    if sources.contains(&target) {
        return Err(Error::invalid(format!("merge target {target} is also a source")));
    }
    let present = corpus.sectors();
    for s in sources {
        if !present.contains(s) {
            return Err(Error::invalid(format!("sector {s} is absent from the corpus")));
        }
    }
    let docs = corpus
        .iter()
        .map(|d| {
            let mut d = d.clone();
            if sources.contains(&d.sector) {
                d.sector = target;
            }
            d
        })
        .collect();
    Corpus::new(docs)
}

/// Draw `n_per_stratum` documents from every sector without replacement.
///
/// Within a stratum the ids are sorted, shuffled with a ChaCha8 generator
/// seeded by `seed` on the stream numbered after the sector, and the first
/// `n` kept. The result lists the chosen documents in corpus order.
pub fn stratified_sample(corpus: &Corpus, n_per_stratum: usize, seed: u64) -> Result<Corpus> {
    if n_per_stratum == 0 {
        return Err(Error::invalid("n_per_stratum must be positive"));
    }
    let mut by_sector: BTreeMap<Sector, Vec<&str>> = BTreeMap::new();
    for d in corpus {
        by_sector.entry(d.sector).or_default().push(d.id.as_str());
    }
    for (sector, ids) in &by_sector {
        if ids.len() < n_per_stratum {
            return Err(Error::StratumTooSmall {
                stratum: sector.to_string(),
                size: ids.len(),
                requested: n_per_stratum,
            });
        }
    }
    let mut chosen: std::collections::HashSet<&str> = std::collections::HashSet::new();
    for (sector, mut ids) in by_sector {
        ids.sort_unstable();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(sector.index());
        ids.shuffle(&mut rng);
        chosen.extend(ids.into_iter().take(n_per_stratum));
    }
    Corpus::new(
        corpus
            .iter()
            .filter(|d| chosen.contains(d.id.as_str()))
            .cloned()
            .collect(),
    )
}
