//! Co-occurrence semantic networks: construction, communities, betweenness,
//! top-term extraction and export.

mod betweenness;
mod export;
mod graph;
mod louvain;

pub use betweenness::{betweenness, lengths_tie, CentralityMode, CentralityScores, TIE_TOLERANCE};
pub use export::{export_graph, import_json_edgelist, write_graph, GraphFormat, NetworkExport};
pub use graph::{build_cooccurrence, CooccurrenceConfig, Node, SemanticGraph, Window};
pub use louvain::{louvain, modularity, CommunityAssignment, MIN_GAIN};

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedTerm {
    pub node: usize,
    pub term: String,
    pub betweenness: f64,
    pub freq: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopTerms {
    /// Indexed by community id.
    pub per_community: Vec<Vec<RankedTerm>>,
    pub global: Vec<RankedTerm>,
}

/// Highest-betweenness terms per community and overall. Ties go to the more
/// frequent term, then the lexicographically smaller one.
pub fn top_terms(
    graph: &SemanticGraph,
    communities: &CommunityAssignment,
    centrality: &CentralityScores,
    k: usize,
) -> Result<TopTerms> {
    if k == 0 {
        return Err(Error::invalid("top-k needs k >= 1"));
    }
    let n = graph.node_count();
    if communities.membership.len() != n || centrality.scores.len() != n {
        return Err(Error::invalid("community and centrality vectors must cover every node"));
    }
    let mut ranked: Vec<usize> = (0..n).collect();
    ranked.sort_by(|&a, &b| {
        let (na, nb) = (&graph.nodes()[a], &graph.nodes()[b]);
        centrality.scores[b]
            .total_cmp(&centrality.scores[a])
            .then(nb.freq.cmp(&na.freq))
            .then(na.term.cmp(&nb.term))
    });
    let entry = |i: usize| RankedTerm {
        node: i,
        term: graph.nodes()[i].term.clone(),
        betweenness: centrality.scores[i],
        freq: graph.nodes()[i].freq,
    };
    let mut per_community = vec![Vec::new(); communities.community_count()];
    for &i in &ranked {
        let list = &mut per_community[communities.membership[i]];
        if list.len() < k {
            list.push(entry(i));
        }
    }
    let global = ranked.iter().take(k).map(|&i| entry(i)).collect();
    Ok(TopTerms { per_community, global })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture(
        terms: &[(&str, u64)],
        scores: Vec<f64>,
        membership: Vec<usize>,
    ) -> (SemanticGraph, CommunityAssignment, CentralityScores) {
        let g = SemanticGraph::from_parts(
            terms
                .iter()
                .map(|&(t, f)| Node {
                    term: t.into(),
                    freq: f,
                })
                .collect(),
            [],
        )
        .unwrap();
        let a = CommunityAssignment {
            membership,
            modularity_q: 0.0,
            pass_modularity: vec![0.0],
        };
        let c = CentralityScores {
            scores,
            mode: CentralityMode::Binary,
        };
        (g, a, c)
    }

    #[test]
    fn small_community_returns_all_in_order() {
        let (g, a, c) = fixture(&[("a", 1), ("b", 1), ("c", 1)], vec![1.0, 3.0, 2.0], vec![0, 0, 0]);
        let t = top_terms(&g, &a, &c, 5).unwrap();
        let terms: Vec<_> = t.per_community[0].iter().map(|r| r.term.as_str()).collect();
        assert_eq!(terms, ["b", "c", "a"]);
    }

    #[test]
    fn ties_by_frequency_then_term() {
        let (g, a, c) = fixture(
            &[("delta", 1), ("alpha", 1), ("gamma", 5), ("beta", 1)],
            // ids follow term order: alpha, beta, delta, gamma
            vec![2.0, 2.0, 2.0, 2.0],
            vec![0, 0, 1, 1],
        );
        let t = top_terms(&g, &a, &c, 3).unwrap();
        let global: Vec<_> = t.global.iter().map(|r| r.term.as_str()).collect();
        assert_eq!(global, ["gamma", "alpha", "beta"]);
        let first: Vec<_> = t.per_community[0].iter().map(|r| r.term.as_str()).collect();
        assert_eq!(first, ["alpha", "beta"]);
        assert!(top_terms(&g, &a, &c, 0).is_err());
    }
}
