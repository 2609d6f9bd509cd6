//! Sentence segmentation, tokenization, syllable estimation and noise removal.
//!
//! # Sentence rule
//!
//! A sentence ends at one of `. ! ? ;` (optionally followed by more
//! terminals or closing quotes/brackets) when the next non-space character is
//! an uppercase letter or a digit, possibly behind an opening quote or
//! bracket. A period does not end a sentence when the word before it
//! is a listed abbreviation or a single letter (an initial). Enumeration
//! markers such as `1.` therefore count as sentences of their own.
//!
//! # Token rule
//!
//! | input                      | effect                         |
//! |----------------------------|--------------------------------|
//! | letter or digit            | part of the current token      |
//! | `-`, `'`, `’` between two letters/digits | kept inside the token |
//! | anything else              | ends the token                 |
//!
//! Tokens are lowercased and `’` is normalized to `'`. So
//! `"state-of-the-art R&D"` gives `[state-of-the-art, r, d]`.
//!
//! # Syllable rule
//!
//! Hyphenated words are counted part by part and summed. Each part is
//! lowercased with apostrophes removed, then:
//!
//! 1. Words in the exception table return their listed count.
//! 2. Count maximal groups of vowels `a e i o u`; `y` is a vowel unless it
//!    starts the word or is followed by a vowel.
//! 3. Split groups that are usually two syllables: `io` unless after
//!    `c g s t x`; `ia` unless after `c t`; `ua` unless after `q g`.
//! 4. A final lone `e` after a consonant is silent, except `le` after a
//!    consonant (`ta-ble`).
//! 5. A final `es` whose `e` is a lone vowel is silent unless it follows
//!    `c g s x z`, `ch`, `sh`, or a consonant + `l`.
//! 6. A final `ed` whose `e` is a lone vowel is silent unless it follows
//!    `t` or `d`.
//! 7. The result is clamped to at least 1.

use std::collections::{BTreeSet, HashMap};
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const DEFAULT_STOPWORDS: &str = include_str!("../data/lists/stopwords_en.txt");
const DEFAULT_NONINFORMATIVE: &str = include_str!("../data/lists/noninformative_en.txt");
const DEFAULT_ABBREVIATIONS: &str = include_str!("../data/lists/abbreviations_en.txt");

/// Ordered lowercase tokens with sentence ranges.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TokenStream {
    pub tokens: Vec<String>,
    /// Half-open token ranges, one per sentence; they partition `0..tokens.len()`.
    pub sentence_bounds: Vec<(usize, usize)>,
    /// Token count before any removal pass.
    pub raw_word_count: usize,
}

impl TokenStream {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn sentences(&self) -> impl Iterator<Item = &[String]> {
        self.sentence_bounds.iter().map(move |&(s, e)| &self.tokens[s..e])
    }
}

/// Word lists used by [`remove_noise`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrepConfig {
    stopwords: BTreeSet<String>,
    noninformative: BTreeSet<String>,
}

impl Default for PrepConfig {
    fn default() -> Self {
        PrepConfig::new(
            parse_word_list(DEFAULT_STOPWORDS),
            parse_word_list(DEFAULT_NONINFORMATIVE),
        )
        .expect("shipped word lists are disjoint")
    }
}

impl PrepConfig {
    /// Entries are lowercased to match tokens.
    pub fn new(
        stopwords: impl IntoIterator<Item = String>,
        noninformative: impl IntoIterator<Item = String>,
    ) -> Result<Self> {
        let norm = |w: String| w.trim().replace('’', "'").to_lowercase();
        let stopwords: BTreeSet<String> = stopwords.into_iter().map(norm).collect();
        let noninformative: BTreeSet<String> = noninformative.into_iter().map(norm).collect();
        if let Some(w) = stopwords.intersection(&noninformative).next() {
            return Err(Error::invalid(format!(
                "{w:?} is both a stopword and a non-informative word"
            )));
        }
        Ok(PrepConfig {
            stopwords,
            noninformative,
        })
    }

    /// Build from list files; `None` keeps the shipped list.
    pub fn from_files(stopwords: Option<&Path>, noninformative: Option<&Path>) -> Result<Self> {
        let stop = match stopwords {
            Some(p) => load_word_list(p)?,
            None => parse_word_list(DEFAULT_STOPWORDS),
        };
        let non = match noninformative {
            Some(p) => load_word_list(p)?,
            None => parse_word_list(DEFAULT_NONINFORMATIVE),
        };
        PrepConfig::new(stop, non)
    }

    pub fn stopwords(&self) -> &BTreeSet<String> {
        &self.stopwords
    }

    pub fn noninformative(&self) -> &BTreeSet<String> {
        &self.noninformative
    }

    fn is_noise(&self, token: &str) -> bool {
        self.stopwords.contains(token) || self.noninformative.contains(token)
    }
}

/// Parse a one-entry-per-line list; `#` starts a comment line.
pub fn parse_word_list(data: &str) -> Vec<String> {
    data.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect()
}

pub fn load_word_list(path: &Path) -> Result<Vec<String>> {
    let data = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(parse_word_list(&data))
}

fn abbreviations() -> &'static BTreeSet<String> {
    static ABBR: OnceLock<BTreeSet<String>> = OnceLock::new();
    ABBR.get_or_init(|| parse_word_list(DEFAULT_ABBREVIATIONS).into_iter().collect())
}

fn is_terminal(c: char) -> bool {
    matches!(c, '.' | '!' | '?' | ';')
}

fn is_closing(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | ']' | '”' | '’' | '»')
}

fn is_opening(c: char) -> bool {
    matches!(c, '"' | '\'' | '(' | '[' | '“' | '‘' | '«')
}

/// Split text into trimmed sentence strings.
pub fn split_sentences(text: &str) -> Vec<String> {
    split_sentence_spans(text)
        .into_iter()
        .map(|(s, e)| text[s..e].to_string())
        .collect()
}

/// Byte spans of the trimmed sentences.
fn split_sentence_spans(text: &str) -> Vec<(usize, usize)> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let n = chars.len();
    let mut spans = Vec::new();
    let mut start = 0usize;
    let mut k = 0usize;
    while k < n {
        let (_, c) = chars[k];
        if !is_terminal(c) {
            k += 1;
            continue;
        }
        let mut j = k + 1;
        while j < n && (is_terminal(chars[j].1) || is_closing(chars[j].1)) {
            j += 1;
        }
        if j >= n || !chars[j].1.is_whitespace() {
            k = j.max(k + 1);
            continue;
        }
        let mut m = j;
        while m < n && (chars[m].1.is_whitespace() || is_opening(chars[m].1)) {
            m += 1;
        }
        if m >= n {
            break;
        }
        let next = chars[m].1;
        let mut boundary = next.is_uppercase() || next.is_numeric();
        if boundary && c == '.' {
            let word_start = word_start_before(&chars, k);
            let word: String = chars[word_start..k].iter().map(|&(_, ch)| ch).collect();
            let word = word.trim_start_matches(is_opening);
            let lower = word.to_lowercase();
            let initial = word.chars().count() == 1 && word.chars().all(char::is_alphabetic);
            if abbreviations().contains(&lower) || initial {
                boundary = false;
            }
        }
        if boundary {
            let end = chars[j].0;
            push_trimmed(text, start, end, &mut spans);
            start = end;
        }
        k = j;
    }
    push_trimmed(text, start, text.len(), &mut spans);
    spans
}

fn word_start_before(chars: &[(usize, char)], k: usize) -> usize {
    let mut i = k;
    while i > 0 && !chars[i - 1].1.is_whitespace() {
        i -= 1;
    }
    i
}

fn push_trimmed(text: &str, start: usize, end: usize, out: &mut Vec<(usize, usize)>) {
    let slice = &text[start..end];
    let lead = slice.len() - slice.trim_start().len();
    let trimmed = slice.trim();
    if !trimmed.is_empty() {
        out.push((start + lead, start + lead + trimmed.len()));
    }
}

fn is_joiner(c: char) -> bool {
    matches!(c, '-' | '\'' | '’')
}

fn tokenize_span(text: &str, out: &mut Vec<String>) {
    let chars: Vec<char> = text.chars().collect();
    let mut cur = String::new();
    for (i, &c) in chars.iter().enumerate() {
        if c.is_alphanumeric() {
            cur.extend(c.to_lowercase());
        } else if is_joiner(c) && !cur.is_empty() && chars.get(i + 1).is_some_and(|n| n.is_alphanumeric()) {
            cur.push(if c == '’' { '\'' } else { c });
        } else if !cur.is_empty() {
            out.push(std::mem::take(&mut cur));
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
}

/// Tokenize text sentence by sentence.
pub fn tokenize(text: &str) -> TokenStream {
    let mut tokens = Vec::new();
    let mut sentence_bounds = Vec::new();
    for (s, e) in split_sentence_spans(text) {
        let before = tokens.len();
        tokenize_span(&text[s..e], &mut tokens);
        if tokens.len() > before {
            sentence_bounds.push((before, tokens.len()));
        }
    }
    TokenStream {
        raw_word_count: tokens.len(),
        tokens,
        sentence_bounds,
    }
}

fn syllable_exceptions() -> &'static HashMap<&'static str, usize> {
    static EXC: OnceLock<HashMap<&'static str, usize>> = OnceLock::new();
    EXC.get_or_init(|| {
        [
            ("business", 2),
            ("businesses", 3),
            ("area", 3),
            ("areas", 3),
            ("idea", 3),
            ("ideas", 3),
            ("science", 2),
            ("sciences", 3),
            ("scientific", 4),
            ("scientist", 3),
            ("scientists", 3),
            ("create", 2),
            ("creates", 2),
            ("created", 3),
            ("creating", 3),
            ("creation", 3),
            ("creative", 3),
            ("creativity", 5),
            ("being", 2),
            ("society", 4),
            ("societies", 4),
            ("societal", 4),
            ("variety", 4),
            ("quiet", 2),
            ("diet", 2),
            ("client", 2),
            ("clients", 2),
            ("patient", 2),
            ("patients", 2),
            ("every", 2),
            ("everyone", 3),
            ("real", 2),
            ("reality", 4),
            ("react", 2),
            ("area's", 3),
            ("fire", 1),
            ("hour", 1),
            ("our", 1),
            ("ours", 1),
            ("poem", 2),
            ("science's", 2),
        ]
        .into_iter()
        .collect()
    })
}

fn is_vowel(c: u8) -> bool {
    matches!(c, b'a' | b'e' | b'i' | b'o' | b'u')
}

/// Estimate the syllable count of an English word.
pub fn count_syllables(word: &str) -> Result<usize> {
    let invalid = || Error::invalid(format!("cannot count syllables of non-alphabetic word {word:?}"));
    let mut total = 0;
    for part in word.split('-').filter(|p| !p.is_empty()) {
        let cleaned: String = part
            .chars()
            .filter(|&c| !is_joiner(c))
            .flat_map(char::to_lowercase)
            .collect();
        if cleaned.is_empty() || !cleaned.chars().all(|c| c.is_ascii_alphabetic()) {
            return Err(invalid());
        }
        total += part_syllables(&cleaned);
    }
    if total == 0 {
        return Err(invalid());
    }
    Ok(total)
}

fn part_syllables(cleaned: &str) -> usize {
    if let Some(&n) = syllable_exceptions().get(cleaned) {
        return n;
    }
    let w = cleaned.as_bytes();
    let len = w.len();
    let vowel_at = |i: usize| -> bool {
        let c = w[i];
        if is_vowel(c) {
            return true;
        }
        c == b'y' && i > 0 && !(i + 1 < len && is_vowel(w[i + 1]))
    };

    // Vowel groups as [start, end) ranges.
    let mut groups: Vec<(usize, usize)> = Vec::new();
    let mut i = 0;
    while i < len {
        if vowel_at(i) {
            let s = i;
            while i < len && vowel_at(i) {
                i += 1;
            }
            groups.push((s, i));
        } else {
            i += 1;
        }
    }
    let mut count = groups.len();

    for &(s, e) in &groups {
        let g = &w[s..e];
        let before = if s > 0 { Some(w[s - 1]) } else { None };
        let splits = match g {
            b"io" => !matches!(before, Some(b'c' | b'g' | b's' | b't' | b'x')),
            b"ia" => !matches!(before, Some(b'c' | b't')),
            b"ua" => !matches!(before, Some(b'q' | b'g')),
            _ => false,
        };
        if splits {
            count += 1;
        }
    }

    let lone_final_vowel = |at: usize| -> bool { groups.last().is_some_and(|&(s, e)| s == at && e == at + 1) };
    let consonant = |i: usize| !vowel_at(i);

    if count > 1 && len >= 2 && w[len - 1] == b'e' && lone_final_vowel(len - 1) {
        let le_after_consonant = w[len - 2] == b'l' && len >= 3 && consonant(len - 3);
        if !le_after_consonant {
            count -= 1;
        }
    } else if count > 1 && len >= 3 && w.ends_with(b"es") && lone_final_vowel(len - 2) {
        let p = w[len - 3];
        let voiced = matches!(p, b'c' | b'g' | b's' | b'x' | b'z')
            || (len >= 4 && (w[len - 4..len - 2] == *b"ch" || w[len - 4..len - 2] == *b"sh"))
            || (p == b'l' && len >= 4 && consonant(len - 4));
        if !voiced {
            count -= 1;
        }
    } else if count > 1
        && len >= 3
        && w.ends_with(b"ed")
        && lone_final_vowel(len - 2)
        && !matches!(w[len - 3], b't' | b'd')
    {
        count -= 1;
    }
    count.clamp(1, len)
}

/// Drop stopwords and non-informative words, re-indexing sentence ranges.
pub fn remove_noise(stream: &TokenStream, config: &PrepConfig) -> TokenStream {
    let mut tokens = Vec::with_capacity(stream.tokens.len());
    let mut sentence_bounds = Vec::with_capacity(stream.sentence_bounds.len());
    for &(s, e) in &stream.sentence_bounds {
        let before = tokens.len();
        tokens.extend(stream.tokens[s..e].iter().filter(|t| !config.is_noise(t)).cloned());
        if tokens.len() > before {
            sentence_bounds.push((before, tokens.len()));
        }
    }
    TokenStream {
        tokens,
        sentence_bounds,
        raw_word_count: stream.raw_word_count,
    }
}

/// Tokenize and clean in one step.
pub fn prepare(text: &str, config: &PrepConfig) -> TokenStream {
    remove_noise(&tokenize(text), config)
}
