//! Agglomerative clustering on `1 - cosine` dissimilarities.
//!
//! Linkage values are maintained with Lance-Williams updates. At each step
//! the pair with the smallest linkage is merged; pairs within
//! [`HEIGHT_TOLERANCE`] of the minimum are tied, and the tie goes to the pair
//! whose smaller member label is lexicographically smallest, then to the
//! smaller label of the other cluster.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::SimilarityMatrix;
use crate::error::{Error, Result};

pub const HEIGHT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Linkage {
    #[default]
    Average,
    Complete,
    Single,
}

impl FromStr for Linkage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "average" | "upgma" => Ok(Linkage::Average),
            "complete" => Ok(Linkage::Complete),
            "single" => Ok(Linkage::Single),
            _ => Err(Error::invalid(format!("unknown linkage {s:?}"))),
        }
    }
}

/// One agglomeration step. Cluster ids `0..n` are leaves; merge `i` creates
/// cluster `n + i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub height: f64,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dendrogram {
    pub leaves: Vec<String>,
    pub merges: Vec<Merge>,
}

struct Cluster {
    id: usize,
    size: usize,
    min_label: usize,
}

pub fn hac(sim: &SimilarityMatrix, linkage: Linkage) -> Result<Dendrogram> {
    let n = sim.labels.len();
    if n < 2 {
        return Err(Error::invalid("clustering needs at least two rows"));
    }
    // Rank labels once so tie-breaks compare integers.
    let mut by_label: Vec<usize> = (0..n).collect();
    by_label.sort_by(|&a, &b| sim.labels[a].cmp(&sim.labels[b]));
    let mut rank = vec![0; n];
    for (r, &i) in by_label.iter().enumerate() {
        rank[i] = r;
    }

    let mut dist: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| 1.0 - sim.values[i][j]).collect())
        .collect();
    let mut active: Vec<Option<Cluster>> = (0..n)
        .map(|i| {
            Some(Cluster {
                id: i,
                size: 1,
                min_label: rank[i],
            })
        })
        .collect();

    let mut merges = Vec::with_capacity(n - 1);
    for step in 0..n - 1 {
        let live: Vec<usize> = (0..n).filter(|&i| active[i].is_some()).collect();
        let mut min = f64::INFINITY;
        for (x, &i) in live.iter().enumerate() {
            for &j in &live[x + 1..] {
                min = min.min(dist[i][j]);
            }
        }
        let mut best: Option<((usize, usize), (usize, usize))> = None;
        for (x, &i) in live.iter().enumerate() {
            for &j in &live[x + 1..] {
                if dist[i][j] - min > HEIGHT_TOLERANCE {
                    continue;
                }
                let (li, lj) = (
                    active[i].as_ref().unwrap().min_label,
                    active[j].as_ref().unwrap().min_label,
                );
                let key = (li.min(lj), li.max(lj));
                let pair = if li < lj { (i, j) } else { (j, i) };
                if best.is_none_or(|(k, _)| key < k) {
                    best = Some((key, pair));
                }
            }
        }
        let (_, (a, b)) = best.expect("at least two live clusters");
        let height = dist[a][b];
        let ca = active[a].take().unwrap();
        let cb = active[b].take().unwrap();
        let size = ca.size + cb.size;
        for &k in &live {
            if k == a || k == b {
                continue;
            }
            let d = match linkage {
                Linkage::Average => (ca.size as f64 * dist[a][k] + cb.size as f64 * dist[b][k]) / size as f64,
                Linkage::Complete => dist[a][k].max(dist[b][k]),
                Linkage::Single => dist[a][k].min(dist[b][k]),
            };
            dist[a][k] = d;
            dist[k][a] = d;
        }
        merges.push(Merge {
            left: ca.id,
            right: cb.id,
            height,
            size,
        });
        // The merged cluster reuses slot `a`.
        active[a] = Some(Cluster {
            id: n + step,
            size,
            min_label: ca.min_label.min(cb.min_label),
        });
    }
    Ok(Dendrogram {
        leaves: sim.labels.clone(),
        merges,
    })
}

impl Dendrogram {
    pub fn validate(&self) -> Result<()> {
        let n = self.leaves.len();
        if n < 2 || self.merges.len() != n - 1 {
            return Err(Error::invalid(format!(
                "{} leaves need {} merges, found {}",
                n,
                n.saturating_sub(1),
                self.merges.len()
            )));
        }
        let mut used = vec![false; 2 * n - 1];
        let mut size = vec![1usize; 2 * n - 1];
        for (i, m) in self.merges.iter().enumerate() {
            let id = n + i;
            for c in [m.left, m.right] {
                if c >= id || used[c] {
                    return Err(Error::invalid(format!(
                        "merge {i} reuses or forward-references cluster {c}"
                    )));
                }
                used[c] = true;
            }
            size[id] = size[m.left] + size[m.right];
            if m.size != size[id] || m.height.is_nan() || m.height < 0.0 {
                return Err(Error::invalid(format!("merge {i} has inconsistent size or height")));
            }
        }
        let mut seen = std::collections::HashSet::new();
        if !self.leaves.iter().all(|l| seen.insert(l)) {
            return Err(Error::invalid("duplicate leaf label"));
        }
        Ok(())
    }

    fn height_of(&self, cluster: usize) -> f64 {
        let n = self.leaves.len();
        if cluster < n {
            0.0
        } else {
            self.merges[cluster - n].height
        }
    }

    /// Newick text. A node sits at half its merge height, so two leaves
    /// merged at height `h` each get branch length `h / 2`.
    pub fn to_newick(&self) -> String {
        let n = self.leaves.len();
        let root = n + self.merges.len() - 1;
        let mut s = String::new();
        self.newick_node(root, &mut s);
        s.push(';');
        s
    }

    fn newick_node(&self, cluster: usize, out: &mut String) {
        let n = self.leaves.len();
        if cluster < n {
            out.push_str(&newick_label(&self.leaves[cluster]));
            return;
        }
        let m = &self.merges[cluster - n];
        out.push('(');
        for (i, child) in [m.left, m.right].into_iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            self.newick_node(child, out);
            let len = (m.height - self.height_of(child)) / 2.0;
            let _ = write!(out, ":{}", format_length(len));
        }
        out.push(')');
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json<R: Read>(reader: R) -> Result<Dendrogram> {
        let d: Dendrogram = serde_json::from_reader(reader)?;
        d.validate()?;
        Ok(d)
    }

    /// Leaf label sets of each merge's two children, for comparing trees.
    pub fn merge_members(&self) -> Vec<(Vec<String>, Vec<String>, f64)> {
        let n = self.leaves.len();
        let mut members: Vec<Vec<String>> = self.leaves.iter().map(|l| vec![l.clone()]).collect();
        let mut out = Vec::new();
        for m in &self.merges {
            let mut l = members[m.left].clone();
            let mut r = members[m.right].clone();
            l.sort();
            r.sort();
            out.push((l.clone(), r.clone(), m.height));
            l.extend(r);
            members.push(l);
        }
        debug_assert_eq!(members.len(), 2 * n - 1);
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DendrogramFormat {
    Newick,
    Json,
}

pub fn export_dendrogram(d: &Dendrogram, format: DendrogramFormat, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    d.validate()?;
    let text = match format {
        DendrogramFormat::Newick => format!("{}\n", d.to_newick()),
        DendrogramFormat::Json => d.to_json()?,
    };
    let mut f = File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))
}

/// Up to 12 decimals, trailing zeros removed.
fn format_length(x: f64) -> String {
    let s = format!("{:.12}", x.max(0.0));
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() {
        "0".into()
    } else {
        s.to_string()
    }
}

fn newick_label(label: &str) -> String {
    if label.chars().any(|c| c.is_whitespace() || "()[]':;,".contains(c)) {
        format!("'{}'", label.replace('\'', "''"))
    } else {
        label.to_string()
    }
}
