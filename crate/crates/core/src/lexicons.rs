//! Category dictionaries and per-document match ratios.
//!
//! A lexicon file is UTF-8 CSV with the header `category,entry`. An entry is
//! a word or a space-separated phrase; it is tokenized with the same rules as
//! document text, so `same-sex` stays one token and `renewable energy` is two.
//!
//! Matching is greedy, longest phrase first, scanning left to right inside
//! each sentence. A match of an `n`-token phrase adds `n` to the category
//! count, and the ratio is `100 * count / raw_word_count`.

use std::collections::HashSet;
use std::path::Path;

use indexmap::IndexMap;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::textprep::{tokenize, TokenStream};

#[derive(Debug, Clone, PartialEq, Eq)]
struct Category {
    entries: HashSet<Vec<String>>,
    max_len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    name: String,
    categories: IndexMap<String, Category>,
}

impl Lexicon {
    /// Build from `(category, entry)` pairs in file order.
    pub fn from_pairs<I, C, E>(name: impl Into<String>, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (C, E)>,
        C: AsRef<str>,
        E: AsRef<str>,
    {
        let name = name.into();
        let mut lex = Lexicon {
            name,
            categories: IndexMap::new(),
        };
        for (i, (c, e)) in pairs.into_iter().enumerate() {
            lex.insert(c.as_ref(), e.as_ref(), i as u64 + 1)?;
        }
        lex.finish()?;
        Ok(lex)
    }

    fn insert(&mut self, category: &str, entry: &str, line: u64) -> Result<()> {
        let err = |message: String| Error::Lexicon {
            lexicon: self.name.clone(),
            line,
            message,
        };
        let category = category.trim();
        if category.is_empty() {
            return Err(err("empty category name".into()));
        }
        let tokens = tokenize(entry).tokens;
        if tokens.is_empty() {
            return Err(err(format!("entry {entry:?} has no word characters")));
        }
        let cat = self.categories.entry(category.to_string()).or_insert_with(|| Category {
            entries: HashSet::new(),
            max_len: 0,
        });
        cat.max_len = cat.max_len.max(tokens.len());
        if !cat.entries.insert(tokens) {
            return Err(err(format!(
                "duplicate entry {:?} in category {category:?}",
                entry.trim().to_lowercase()
            )));
        }
        Ok(())
    }

    fn finish(&self) -> Result<()> {
        if self.categories.is_empty() {
            return Err(Error::Lexicon {
                lexicon: self.name.clone(),
                line: 0,
                message: "lexicon has no categories".into(),
            });
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn categories(&self) -> impl Iterator<Item = &str> {
        self.categories.keys().map(String::as_str)
    }

    /// Number of entries per category, in file order.
    pub fn sizes(&self) -> IndexMap<String, usize> {
        self.categories
            .iter()
            .map(|(k, c)| (k.clone(), c.entries.len()))
            .collect()
    }

    pub fn contains(&self, category: &str, entry: &str) -> bool {
        let tokens = tokenize(entry).tokens;
        self.categories
            .get(category)
            .is_some_and(|c| c.entries.contains(&tokens))
    }

    /// Copy without one entry; used for monotonicity checks.
    pub fn without(&self, category: &str, entry: &str) -> Lexicon {
        let mut out = self.clone();
        if let Some(c) = out.categories.get_mut(category) {
            c.entries.remove(&tokenize(entry).tokens);
        }
        out
    }
}

/// Load a `category,entry` CSV file. The lexicon is named after the file stem.
pub fn load_lexicon(path: impl AsRef<Path>) -> Result<Lexicon> {
    let path = path.as_ref();
    let name = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("lexicon")
        .to_string();
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            other => Error::Schema(format!("{other:?}")),
        })?;
    let headers = rdr.headers()?.clone();
    let col = |n: &str| headers.iter().position(|h| h.trim().eq_ignore_ascii_case(n));
    let (ci, ei) = match (col("category"), col("entry")) {
        (Some(c), Some(e)) => (c, e),
        (None, _) => {
            return Err(Error::Schema(format!(
                "{}: missing column \"category\"",
                path.display()
            )))
        }
        (_, None) => return Err(Error::Schema(format!("{}: missing column \"entry\"", path.display()))),
    };
    let mut lex = Lexicon {
        name,
        categories: IndexMap::new(),
    };
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        lex.insert(rec.get(ci).unwrap_or(""), rec.get(ei).unwrap_or(""), line)?;
    }
    lex.finish()?;
    Ok(lex)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TagResult {
    pub doc_id: String,
    pub lexicon: String,
    /// Matched tokens per category.
    pub counts: IndexMap<String, usize>,
    /// Matched tokens per 100 raw words, in `[0, 100]`.
    pub ratios: IndexMap<String, f64>,
}

fn count_matches(stream: &TokenStream, cat: &Category) -> usize {
    let mut matched = 0;
    for sentence in stream.sentences() {
        let mut p = 0;
        while p < sentence.len() {
            let longest = cat.max_len.min(sentence.len() - p);
            let hit = (1..=longest).rev().find(|&l| cat.entries.contains(&sentence[p..p + l]));
            match hit {
                Some(l) => {
                    matched += l;
                    p += l;
                }
                None => p += 1,
            }
        }
    }
    matched
}

/// Tag a raw (unfiltered) token stream.
pub fn tag(doc_id: &str, stream: &TokenStream, lexicon: &Lexicon) -> Result<TagResult> {
    if stream.raw_word_count == 0 {
        return Err(Error::invalid(format!("document {doc_id:?} has no words to tag")));
    }
    let words = stream.raw_word_count as f64;
    let mut counts = IndexMap::new();
    let mut ratios = IndexMap::new();
    for (name, cat) in &lexicon.categories {
        let n = count_matches(stream, cat);
        counts.insert(name.clone(), n);
        ratios.insert(name.clone(), 100.0 * n as f64 / words);
    }
    Ok(TagResult {
        doc_id: doc_id.to_string(),
        lexicon: lexicon.name.clone(),
        counts,
        ratios,
    })
}

/// Tag every document against every lexicon; rows sorted by document id,
/// then lexicon order.
pub fn tag_corpus(corpus: &Corpus, lexicons: &[Lexicon]) -> Result<Vec<TagResult>> {
    if corpus.is_empty() {
        return Err(Error::invalid("cannot tag an empty corpus"));
    }
    let mut docs: Vec<_> = corpus.iter().collect();
    docs.sort_by(|a, b| a.id.cmp(&b.id));
    let per_doc: Vec<Vec<TagResult>> = docs
        .par_iter()
        .map(|d| {
            let stream = tokenize(&d.text);
            lexicons.iter().map(|l| tag(&d.id, &stream, l)).collect()
        })
        .collect::<Result<_>>()?;
    Ok(per_doc.into_iter().flatten().collect())
}
