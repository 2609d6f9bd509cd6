//! Slow reference computations used as test oracles.

#![allow(clippy::needless_range_loop)]

use mission_content::semnet::SemanticGraph;
use mission_content::simclust::{Linkage, SimilarityMatrix};

use super::Lcg;

// ---- betweenness: enumerate every simple path -------------------------------

fn all_simple_paths(adj: &[Vec<(usize, f64)>], s: usize, t: usize) -> Vec<(Vec<usize>, f64)> {
    fn go(
        adj: &[Vec<(usize, f64)>],
        u: usize,
        t: usize,
        len: f64,
        path: &mut Vec<usize>,
        on: &mut Vec<bool>,
        out: &mut Vec<(Vec<usize>, f64)>,
    ) {
        if u == t {
            out.push((path.clone(), len));
            return;
        }
        for &(v, l) in &adj[u] {
            if !on[v] {
                on[v] = true;
                path.push(v);
                go(adj, v, t, len + l, path, on, out);
                path.pop();
                on[v] = false;
            }
        }
    }
    let mut on = vec![false; adj.len()];
    on[s] = true;
    let mut out = Vec::new();
    go(adj, s, t, 0.0, &mut vec![s], &mut on, &mut out);
    out
}

pub fn betweenness_oracle(g: &SemanticGraph, weighted: bool) -> Vec<f64> {
    let n = g.node_count();
    let mut adj = vec![Vec::new(); n];
    for (a, b, w) in g.edges() {
        adj[a].push((b, if weighted { 1.0 / w as f64 } else { 1.0 }));
    }
    let mut score = vec![0.0; n];
    for s in 0..n {
        for t in 0..n {
            if s == t {
                continue;
            }
            let paths = all_simple_paths(&adj, s, t);
            let Some(best) = paths.iter().map(|p| p.1).reduce(f64::min) else {
                continue;
            };
            let shortest: Vec<_> = paths
                .iter()
                .filter(|p| (p.1 - best).abs() <= 1e-10 * p.1.abs().max(best.abs()))
                .collect();
            for v in 0..n {
                if v == s || v == t {
                    continue;
                }
                let through = shortest.iter().filter(|p| p.0.contains(&v)).count();
                score[v] += through as f64 / shortest.len() as f64;
            }
        }
    }
    score
}

// ---- modularity: dense double sum ------------------------------------------

pub fn modularity_oracle(g: &SemanticGraph, membership: &[usize], gamma: f64) -> f64 {
    let n = g.node_count();
    let mut a = vec![vec![0.0; n]; n];
    for (s, t, w) in g.edges() {
        a[s][t] += w as f64;
        a[t][s] += w as f64;
    }
    let k: Vec<f64> = a.iter().map(|row| row.iter().sum()).collect();
    let two_m: f64 = k.iter().sum();
    if two_m == 0.0 {
        return 0.0;
    }
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if membership[i] == membership[j] {
                q += a[i][j] - gamma * k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}

// ---- HAC: recompute every linkage from the leaf members --------------------

fn linkage_oracle(d: &[Vec<f64>], a: &[usize], b: &[usize], linkage: Linkage) -> f64 {
    let pairs = a.iter().flat_map(|&i| b.iter().map(move |&j| (i, j)));
    match linkage {
        Linkage::Average => pairs.map(|(i, j)| d[i][j]).sum::<f64>() / (a.len() * b.len()) as f64,
        Linkage::Complete => pairs.map(|(i, j)| d[i][j]).fold(f64::MIN, f64::max),
        Linkage::Single => pairs.map(|(i, j)| d[i][j]).fold(f64::MAX, f64::min),
    }
}

/// Merges as (left leaves, right leaves, height), with leaves sorted by label.
pub fn hac_oracle(sim: &SimilarityMatrix, linkage: Linkage) -> Vec<(Vec<String>, Vec<String>, f64)> {
    let n = sim.labels.len();
    let d: Vec<Vec<f64>> = sim.values.iter().map(|r| r.iter().map(|v| 1.0 - v).collect()).collect();
    let mut clusters: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let min_label = |c: &Vec<usize>| c.iter().map(|&i| sim.labels[i].clone()).min().unwrap();
    let mut out = Vec::new();
    while clusters.len() > 1 {
        let mut cands = Vec::new();
        for i in 0..clusters.len() {
            for j in i + 1..clusters.len() {
                cands.push((linkage_oracle(&d, &clusters[i], &clusters[j], linkage), i, j));
            }
        }
        let best = cands.iter().map(|c| c.0).fold(f64::MAX, f64::min);
        let (_, i, j) = cands
            .into_iter()
            .filter(|c| c.0 - best <= 1e-12)
            .min_by_key(|&(_, i, j)| {
                let (a, b) = (min_label(&clusters[i]), min_label(&clusters[j]));
                if a < b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .unwrap();
        let (mut l, mut r) = (clusters[i].clone(), clusters[j].clone());
        if min_label(&r) < min_label(&l) {
            std::mem::swap(&mut l, &mut r);
        }
        let height = linkage_oracle(&d, &l, &r, linkage);
        let labels = |c: &[usize]| {
            let mut v: Vec<String> = c.iter().map(|&i| sim.labels[i].clone()).collect();
            v.sort();
            v
        };
        out.push((labels(&l), labels(&r), height));
        let mut merged = l;
        merged.extend(r);
        clusters.remove(j);
        clusters[i] = merged;
    }
    out
}

pub fn random_similarity(rng: &mut Lcg, n: usize, coarse: bool) -> SimilarityMatrix {
    let mut values = vec![vec![1.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            // Coarse values produce many exact ties.
            let v = if coarse {
                rng.below(5) as f64 / 4.0
            } else {
                rng.below(1_000_000) as f64 / 1_000_000.0
            };
            values[i][j] = v;
            values[j][i] = v;
        }
    }
    let mut labels: Vec<String> = (0..n).map(|i| format!("r{}", (b'a' + i as u8) as char)).collect();
    // Shuffle label order so index order and label order differ.
    for i in (1..n).rev() {
        labels.swap(i, rng.below(i as u64 + 1) as usize);
    }
    SimilarityMatrix { labels, values }
}
