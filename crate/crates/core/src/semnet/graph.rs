use std::collections::{BTreeMap, HashMap, HashSet};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textprep::TokenStream;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub term: String,
    /// Total occurrences across all input streams.
    pub freq: u64,
}

/// Directed, weighted term co-occurrence graph.
///
/// Node ids are dense indices assigned in lexicographic term order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SemanticGraph {
    nodes: Vec<Node>,
    index: HashMap<String, usize>,
    edges: BTreeMap<(usize, usize), u64>,
}

impl SemanticGraph {
    /// Assemble from terms and weighted edges. Terms are re-sorted, so ids in
    /// the result may differ from positions in `nodes`.
    pub fn from_parts(nodes: Vec<Node>, edges: impl IntoIterator<Item = (String, String, u64)>) -> Result<Self> {
        let mut nodes = nodes;
        nodes.sort_by(|a, b| a.term.cmp(&b.term));
        let mut index = HashMap::with_capacity(nodes.len());
        for (i, n) in nodes.iter().enumerate() {
            if index.insert(n.term.clone(), i).is_some() {
                return Err(Error::invalid(format!("duplicate node term {:?}", n.term)));
            }
        }
        let mut out = BTreeMap::new();
        for (s, t, w) in edges {
            let (Some(&a), Some(&b)) = (index.get(&s), index.get(&t)) else {
                return Err(Error::invalid(format!(
                    "edge {s:?} -> {t:?} references an unknown node"
                )));
            };
            if a == b {
                return Err(Error::invalid(format!("self-loop on {s:?}")));
            }
            if w == 0 {
                return Err(Error::invalid(format!("edge {s:?} -> {t:?} has zero weight")));
            }
            if out.insert((a, b), w).is_some() {
                return Err(Error::invalid(format!("duplicate edge {s:?} -> {t:?}")));
            }
        }
        Ok(SemanticGraph {
            nodes,
            index,
            edges: out,
        })
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node_id(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn term(&self, id: usize) -> &str {
        &self.nodes[id].term
    }

    /// Edges as `(source, target, weight)`, sorted by `(source, target)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.edges.iter().map(|(&(s, t), &w)| (s, t, w))
    }

    pub fn weight(&self, source: usize, target: usize) -> Option<u64> {
        self.edges.get(&(source, target)).copied()
    }

    /// Outgoing adjacency lists, each sorted by target id.
    pub fn out_adjacency(&self) -> Vec<Vec<(usize, u64)>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for (s, t, w) in self.edges() {
            adj[s].push((t, w));
        }
        adj
    }
}

/// Which token pairs count as co-occurring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Window {
    /// Any two terms in the same document.
    #[default]
    Document,
    /// Two terms in the same sentence.
    Sentence,
    /// Two terms at most `k` positions apart.
    Fixed(usize),
}

impl FromStr for Window {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "document" | "doc" => Ok(Window::Document),
            "sentence" => Ok(Window::Sentence),
            _ => {
                let k = lower
                    .strip_prefix("fixed:")
                    .or_else(|| lower.strip_prefix("fixed"))
                    .and_then(|k| {
                        k.trim_matches(|c| c == '(' || c == ')' || c == ' ')
                            .parse::<usize>()
                            .ok()
                    })
                    .filter(|&k| k > 0)
                    .ok_or_else(|| {
                        Error::invalid(format!("unknown window {s:?}; use document, sentence or fixed:K"))
                    })?;
                Ok(Window::Fixed(k))
            }
        }
    }
}

impl std::fmt::Display for Window {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Window::Document => f.write_str("document"),
            Window::Sentence => f.write_str("sentence"),
            Window::Fixed(k) => write!(f, "fixed:{k}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CooccurrenceConfig {
    pub window: Window,
    /// Keep terms that never co-occur with another term as isolated nodes.
    pub keep_isolated: bool,
}

/// Build a co-occurrence graph from noise-removed streams.
///
/// Each unordered pair of distinct terms adds 1 at most once per document,
/// provided the pair co-occurs within the window somewhere in that document.
/// The edge points from the term that comes first at the pair's first
/// qualifying co-occurrence.
pub fn build_cooccurrence(streams: &[TokenStream], config: CooccurrenceConfig) -> SemanticGraph {
    let mut freq: BTreeMap<&str, u64> = BTreeMap::new();
    let mut pair_weights: HashMap<(&str, &str), u64> = HashMap::new();

    for stream in streams {
        for t in &stream.tokens {
            *freq.entry(t.as_str()).or_default() += 1;
        }
        let mut seen: HashSet<(&str, &str)> = HashSet::new();
        let mut directed: Vec<(&str, &str)> = Vec::new();
        match config.window {
            Window::Document => {
                let firsts = first_occurrences(&stream.tokens);
                for (i, &a) in firsts.iter().enumerate() {
                    for &b in &firsts[i + 1..] {
                        if seen.insert(unordered(a, b)) {
                            directed.push((a, b));
                        }
                    }
                }
            }
            Window::Sentence => {
                for sentence in stream.sentences() {
                    let firsts = first_occurrences(sentence);
                    for (i, &a) in firsts.iter().enumerate() {
                        for &b in &firsts[i + 1..] {
                            if seen.insert(unordered(a, b)) {
                                directed.push((a, b));
                            }
                        }
                    }
                }
            }
            Window::Fixed(k) => {
                let toks = &stream.tokens;
                for p in 0..toks.len() {
                    for q in p + 1..toks.len().min(p + k + 1) {
                        let (a, b) = (toks[p].as_str(), toks[q].as_str());
                        if a != b && seen.insert(unordered(a, b)) {
                            directed.push((a, b));
                        }
                    }
                }
            }
        }
        for pair in directed {
            *pair_weights.entry(pair).or_default() += 1;
        }
    }

    let mut connected: HashSet<&str> = HashSet::new();
    for &(a, b) in pair_weights.keys() {
        connected.insert(a);
        connected.insert(b);
    }
    let nodes: Vec<Node> = freq
        .iter()
        .filter(|(t, _)| config.keep_isolated || connected.contains(*t))
        .map(|(t, &f)| Node {
            term: t.to_string(),
            freq: f,
        })
        .collect();
    let index: HashMap<String, usize> = nodes.iter().enumerate().map(|(i, n)| (n.term.clone(), i)).collect();
    let edges = pair_weights
        .into_iter()
        .map(|((a, b), w)| ((index[a], index[b]), w))
        .collect();
    SemanticGraph { nodes, index, edges }
}

fn unordered<'a>(a: &'a str, b: &'a str) -> (&'a str, &'a str) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Distinct tokens in order of first appearance.
fn first_occurrences<S: AsRef<str>>(tokens: &[S]) -> Vec<&str> {
    let mut seen = HashSet::new();
    tokens.iter().map(AsRef::as_ref).filter(|t| seen.insert(*t)).collect()
}
