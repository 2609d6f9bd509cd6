//! Louvain community detection on the symmetrized co-occurrence graph.
//!
//! The directed graph is folded into an undirected one with
//! `w(u, v) = A(u -> v) + A(v -> u)`. Modularity with resolution `γ` is
//!
//! ```text
//! Q = Σ_c [ In_c / 2m  -  γ (Tot_c / 2m)^2 ]
//! ```
//!
//! where `In_c` sums the adjacency matrix over pairs inside `c` (both
//! orders) and `Tot_c` sums node degrees in `c`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::SemanticGraph;
use crate::error::{Error, Result};

/// Smallest modularity increase that justifies moving a node.
pub const MIN_GAIN: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityAssignment {
    /// Community id per node id. Ids are dense from 0, largest community first.
    pub membership: Vec<usize>,
    pub modularity_q: f64,
    /// Modularity of the original graph after each pass, starting with the
    /// all-singletons partition.
    pub pass_modularity: Vec<f64>,
}

impl CommunityAssignment {
    pub fn community_count(&self) -> usize {
        self.membership.iter().max().map_or(0, |&m| m + 1)
    }

    /// Node ids grouped by community.
    pub fn communities(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.community_count()];
        for (node, &c) in self.membership.iter().enumerate() {
            out[c].push(node);
        }
        out
    }
}

/// Undirected weighted graph with self-loop weights kept apart.
#[derive(Debug, Clone)]
struct Level {
    /// `A_ii`: internal weight carried by aggregated nodes.
    self_weight: Vec<f64>,
    /// Neighbours other than the node itself, sorted by id.
    adj: Vec<Vec<(usize, f64)>>,
    degree: Vec<f64>,
    two_m: f64,
}

impl Level {
    fn from_graph(graph: &SemanticGraph) -> Level {
        let n = graph.node_count();
        let mut maps: Vec<std::collections::BTreeMap<usize, f64>> = vec![Default::default(); n];
        for (s, t, w) in graph.edges() {
            *maps[s].entry(t).or_default() += w as f64;
            *maps[t].entry(s).or_default() += w as f64;
        }
        let adj: Vec<Vec<(usize, f64)>> = maps.into_iter().map(|m| m.into_iter().collect()).collect();
        Level::new(vec![0.0; n], adj)
    }

    fn new(self_weight: Vec<f64>, adj: Vec<Vec<(usize, f64)>>) -> Level {
        let degree: Vec<f64> = self_weight
            .iter()
            .zip(&adj)
            .map(|(s, a)| s + a.iter().map(|&(_, w)| w).sum::<f64>())
            .collect();
        let two_m = degree.iter().sum();
        Level {
            self_weight,
            adj,
            degree,
            two_m,
        }
    }

    fn len(&self) -> usize {
        self.degree.len()
    }

    fn modularity(&self, membership: &[usize], resolution: f64) -> f64 {
        if self.two_m <= 0.0 {
            return 0.0;
        }
        let k = membership.iter().max().map_or(0, |&m| m + 1);
        let mut internal = vec![0.0; k];
        let mut total = vec![0.0; k];
        for i in 0..self.len() {
            let c = membership[i];
            total[c] += self.degree[i];
            internal[c] += self.self_weight[i];
            for &(j, w) in &self.adj[i] {
                if membership[j] == c {
                    internal[c] += w;
                }
            }
        }
        internal
            .iter()
            .zip(&total)
            .map(|(&inn, &tot)| inn / self.two_m - resolution * (tot / self.two_m).powi(2))
            .sum()
    }

    /// Greedy local moves until no node can raise modularity by more than
    /// [`MIN_GAIN`]. Returns a dense membership and whether anything moved.
    fn local_moves(&self, resolution: f64, rng: &mut ChaCha8Rng) -> (Vec<usize>, bool) {
        let n = self.len();
        let mut comm: Vec<usize> = (0..n).collect();
        if self.two_m <= 0.0 {
            return (comm, false);
        }
        let m = self.two_m / 2.0;
        let mut tot = self.degree.clone();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);

        let mut link = vec![0.0; n];
        let mut touched: Vec<usize> = Vec::new();
        let mut improved = false;
        loop {
            let mut moved = false;
            for &i in &order {
                let ci = comm[i];
                let ki = self.degree[i];
                for &(j, w) in &self.adj[i] {
                    let c = comm[j];
                    if link[c] == 0.0 {
                        touched.push(c);
                    }
                    link[c] += w;
                }
                tot[ci] -= ki;
                let gain = |c: usize, link: &[f64]| link[c] - resolution * tot[c] * ki / self.two_m;
                let stay = gain(ci, &link);
                touched.sort_unstable();
                let mut best = ci;
                let mut best_gain = stay;
                for &c in &touched {
                    let g = gain(c, &link);
                    if g > best_gain {
                        best = c;
                        best_gain = g;
                    }
                }
                if best != ci && (best_gain - stay) / m <= MIN_GAIN {
                    best = ci;
                }
                tot[best] += ki;
                if best != ci {
                    comm[i] = best;
                    moved = true;
                    improved = true;
                }
                for &c in &touched {
                    link[c] = 0.0;
                }
                touched.clear();
            }
            if !moved {
                break;
            }
        }
        (renumber_by_first_node(&comm), improved)
    }

    fn aggregate(&self, membership: &[usize]) -> Level {
        let k = membership.iter().max().map_or(0, |&m| m + 1);
        let mut self_weight = vec![0.0; k];
        let mut maps: Vec<std::collections::BTreeMap<usize, f64>> = vec![Default::default(); k];
        for i in 0..self.len() {
            let c = membership[i];
            self_weight[c] += self.self_weight[i];
            for &(j, w) in &self.adj[i] {
                let d = membership[j];
                if c == d {
                    self_weight[c] += w;
                } else {
                    *maps[c].entry(d).or_default() += w;
                }
            }
        }
        let adj = maps.into_iter().map(|m| m.into_iter().collect()).collect();
        Level::new(self_weight, adj)
    }
}

fn renumber_by_first_node(comm: &[usize]) -> Vec<usize> {
    let mut map = vec![usize::MAX; comm.len()];
    let mut next = 0;
    comm.iter()
        .map(|&c| {
            if map[c] == usize::MAX {
                map[c] = next;
                next += 1;
            }
            map[c]
        })
        .collect()
}

/// Renumber so the largest community is 0; ties go to the community holding
/// the smaller node id.
fn renumber_by_size(membership: &[usize]) -> Vec<usize> {
    let dense = renumber_by_first_node(membership);
    let k = dense.iter().max().map_or(0, |&m| m + 1);
    let mut sizes = vec![0usize; k];
    for &c in &dense {
        sizes[c] += 1;
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| sizes[b].cmp(&sizes[a]).then(a.cmp(&b)));
    let mut rank = vec![0; k];
    for (r, &c) in order.iter().enumerate() {
        rank[c] = r;
    }
    dense.iter().map(|&c| rank[c]).collect()
}

/// Modularity of `membership` on the symmetrized graph.
pub fn modularity(graph: &SemanticGraph, membership: &[usize], resolution: f64) -> f64 {
    Level::from_graph(graph).modularity(membership, resolution)
}

pub fn louvain(graph: &SemanticGraph, resolution: f64, seed: u64) -> Result<CommunityAssignment> {
    if !(resolution > 0.0 && resolution.is_finite()) {
        return Err(Error::invalid(format!("resolution must be positive, got {resolution}")));
    }
    let base = Level::from_graph(graph);
    let n = base.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut membership: Vec<usize> = (0..n).collect();
    let mut history = vec![base.modularity(&membership, resolution)];
    let mut level = base.clone();
    loop {
        let (comm, improved) = level.local_moves(resolution, &mut rng);
        if !improved {
            break;
        }
        for c in membership.iter_mut() {
            *c = comm[*c];
        }
        history.push(base.modularity(&membership, resolution));
        level = level.aggregate(&comm);
    }
    let membership = renumber_by_size(&membership);
    let modularity_q = base.modularity(&membership, resolution);
    Ok(CommunityAssignment {
        membership,
        modularity_q,
        pass_modularity: history,
    })
}
