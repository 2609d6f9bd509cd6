//! Flesch-Kincaid grade level and Yule's K.
//!
//! Both run on the raw token stream, before stopword removal.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textprep::{count_syllables, tokenize, TokenStream};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReadabilityResult {
    pub words: usize,
    pub sentences: usize,
    pub syllables: usize,
    /// School-grade units; may be negative for very simple text.
    pub fkgl: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiversityResult {
    pub n_tokens: usize,
    pub n_types: usize,
    /// Occurrence count `i` -> number of types seen exactly `i` times.
    pub spectrum: BTreeMap<usize, usize>,
    pub k: f64,
}

/// `0.39 * words/sentences + 11.8 * syllables/words - 15.59`.
pub fn fkgl_formula(words: usize, sentences: usize, syllables: usize) -> f64 {
    let w = words as f64;
    0.39 * (w / sentences as f64) + 11.8 * (syllables as f64 / w) - 15.59
}

pub fn fkgl(text: &str) -> Result<ReadabilityResult> {
    fkgl_stream(&tokenize(text))
}

/// Readability of an already tokenized, unfiltered stream.
///
/// Tokens that are not purely alphabetic (numbers, mixed tokens) count one
/// syllable each.
pub fn fkgl_stream(stream: &TokenStream) -> Result<ReadabilityResult> {
    let words = stream.tokens.len();
    if words == 0 {
        return Err(Error::invalid("readability needs at least one word"));
    }
    let sentences = stream.sentence_bounds.len().max(1);
    let syllables: usize = stream.tokens.iter().map(|t| count_syllables(t).unwrap_or(1)).sum();
    Ok(ReadabilityResult {
        words,
        sentences,
        syllables,
        fkgl: fkgl_formula(words, sentences, syllables),
    })
}

pub fn freq_spectrum<S: AsRef<str>>(tokens: &[S]) -> BTreeMap<usize, usize> {
    let mut freq: HashMap<&str, usize> = HashMap::new();
    for t in tokens {
        *freq.entry(t.as_ref()).or_default() += 1;
    }
    let mut spectrum = BTreeMap::new();
    for count in freq.into_values() {
        *spectrum.entry(count).or_default() += 1;
    }
    spectrum
}

/// `K = 10^4 * (-1/N + sum_i f(i) * (i/N)^2)` from a frequency spectrum.
///
/// Evaluated as `10^4 * (sum_i f(i) * i^2 - N) / N^2`, with the bracket in
/// exact integer arithmetic.
pub fn yules_k_from_spectrum(spectrum: &BTreeMap<usize, usize>) -> Result<f64> {
    let n: u128 = spectrum.iter().map(|(&i, &f)| (i * f) as u128).sum();
    if n == 0 {
        return Err(Error::invalid("Yule's K needs at least one token"));
    }
    let m: u128 = spectrum
        .iter()
        .map(|(&i, &f)| f as u128 * (i as u128) * (i as u128))
        .sum();
    Ok(1e4 * (m - n) as f64 / (n * n) as f64)
}

pub fn yules_k<S: AsRef<str>>(tokens: &[S]) -> Result<DiversityResult> {
    if tokens.is_empty() {
        return Err(Error::invalid("Yule's K needs at least one token"));
    }
    let spectrum = freq_spectrum(tokens);
    let k = yules_k_from_spectrum(&spectrum)?;
    Ok(DiversityResult {
        n_tokens: tokens.len(),
        n_types: spectrum.values().sum(),
        spectrum,
        k,
    })
}
