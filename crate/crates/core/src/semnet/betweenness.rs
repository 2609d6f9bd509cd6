//! Directed betweenness centrality (Brandes accumulation).
//!
//! Scores sum over ordered pairs `(s, t)` with `s != v != t` the fraction of
//! shortest `s -> t` paths passing through `v`. On a symmetrized graph every
//! unordered pair is therefore counted twice. In weighted mode an edge of
//! co-occurrence weight `w` has length `1 / w`.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::SemanticGraph;
use crate::error::{Error, Result};

/// Relative tolerance under which two path lengths count as tied.
pub const TIE_TOLERANCE: f64 = 1e-10;

const SOURCES_PER_TASK: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CentralityMode {
    Binary,
    #[default]
    Weighted,
}

impl FromStr for CentralityMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "binary" => Ok(CentralityMode::Binary),
            "weighted" => Ok(CentralityMode::Weighted),
            _ => Err(Error::invalid(format!("unknown centrality mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralityScores {
    pub scores: Vec<f64>,
    pub mode: CentralityMode,
}

/// Two path lengths are equal within [`TIE_TOLERANCE`].
pub fn lengths_tie(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_TOLERANCE * a.abs().max(b.abs())
}

pub fn betweenness(graph: &SemanticGraph, mode: CentralityMode) -> CentralityScores {
    let n = graph.node_count();
    let adj: Vec<Vec<(usize, f64)>> = graph
        .out_adjacency()
        .into_iter()
        .map(|a| {
            a.into_iter()
                .map(|(t, w)| {
                    let len = match mode {
                        CentralityMode::Binary => 1.0,
                        CentralityMode::Weighted => 1.0 / w as f64,
                    };
                    (t, len)
                })
                .collect()
        })
        .collect();

    let sources: Vec<usize> = (0..n).collect();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(SOURCES_PER_TASK)
        .map(|chunk| {
            let mut acc = vec![0.0; n];
            let mut work = Workspace::new(n);
            for &s in chunk {
                match mode {
                    CentralityMode::Binary => work.bfs(&adj, s),
                    CentralityMode::Weighted => work.dijkstra(&adj, s),
                }
                work.accumulate(s, &mut acc);
            }
            acc
        })
        .collect();

    let mut scores = vec![0.0; n];
    for part in partials {
        for (s, p) in scores.iter_mut().zip(part) {
            *s += p;
        }
    }
    CentralityScores { scores, mode }
}

struct Workspace {
    dist: Vec<f64>,
    sigma: Vec<f64>,
    delta: Vec<f64>,
    preds: Vec<Vec<usize>>,
    /// Nodes in order of non-decreasing distance.
    order: Vec<usize>,
}

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Workspace {
    fn new(n: usize) -> Self {
        Workspace {
            dist: vec![f64::INFINITY; n],
            sigma: vec![0.0; n],
            delta: vec![0.0; n],
            preds: vec![Vec::new(); n],
            order: Vec::with_capacity(n),
        }
    }

    fn reset(&mut self, s: usize) {
        for &v in &self.order {
            self.dist[v] = f64::INFINITY;
            self.sigma[v] = 0.0;
            self.delta[v] = 0.0;
            self.preds[v].clear();
        }
        // Every reached node is settled, so `order` covers all dirty slots.
        self.order.clear();
        self.dist[s] = 0.0;
        self.sigma[s] = 1.0;
    }

    fn bfs(&mut self, adj: &[Vec<(usize, f64)>], s: usize) {
        self.reset(s);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            self.order.push(u);
            let du = self.dist[u];
            for &(v, _) in &adj[u] {
                if self.dist[v].is_infinite() {
                    self.dist[v] = du + 1.0;
                    queue.push_back(v);
                }
                if self.dist[v] == du + 1.0 {
                    self.sigma[v] += self.sigma[u];
                    self.preds[v].push(u);
                }
            }
        }
    }

    fn dijkstra(&mut self, adj: &[Vec<(usize, f64)>], s: usize) {
        self.reset(s);
        let n = self.dist.len();
        let mut settled = vec![false; n];
        let mut heap = BinaryHeap::from([Entry(0.0, s)]);
        while let Some(Entry(d, u)) = heap.pop() {
            if settled[u] || d > self.dist[u] {
                continue;
            }
            settled[u] = true;
            self.order.push(u);
            for &(v, len) in &adj[u] {
                if settled[v] {
                    continue;
                }
                let nd = d + len;
                let cur = self.dist[v];
                if cur.is_infinite() || (nd < cur && !lengths_tie(nd, cur)) {
                    self.dist[v] = nd;
                    self.sigma[v] = self.sigma[u];
                    self.preds[v].clear();
                    self.preds[v].push(u);
                    heap.push(Entry(nd, v));
                } else if lengths_tie(nd, cur) {
                    self.sigma[v] += self.sigma[u];
                    self.preds[v].push(u);
                }
            }
        }
    }

    fn accumulate(&mut self, s: usize, acc: &mut [f64]) {
        for &w in self.order.iter().rev() {
            let coeff = (1.0 + self.delta[w]) / self.sigma[w];
            for &v in &self.preds[w] {
                self.delta[v] += self.sigma[v] * coeff;
            }
            if w != s {
                acc[w] += self.delta[w];
            }
        }
    }
}
