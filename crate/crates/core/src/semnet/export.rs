//! GraphML, DOT and JSON edge-list output. Nodes are written in id order and
//! edges in `(source, target)` order, so output bytes depend only on content.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{CentralityScores, CommunityAssignment, Node, SemanticGraph};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    GraphMl,
    Dot,
    JsonEdgeList,
}

impl GraphFormat {
    pub fn extension(self) -> &'static str {
        match self {
            GraphFormat::GraphMl => "graphml",
            GraphFormat::Dot => "dot",
            GraphFormat::JsonEdgeList => "json",
        }
    }
}

impl FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "graphml" => Ok(GraphFormat::GraphMl),
            "dot" => Ok(GraphFormat::Dot),
            "json" | "json_edgelist" => Ok(GraphFormat::JsonEdgeList),
            _ => Err(Error::invalid(format!("unknown graph format {s:?}"))),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonNode {
    id: usize,
    term: String,
    freq: u64,
    community: usize,
    betweenness: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonEdge {
    s: usize,
    t: usize,
    w: u64,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonGraph {
    nodes: Vec<JsonNode>,
    edges: Vec<JsonEdge>,
}

/// A graph read back from a JSON edge list with its node attributes.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkExport {
    pub graph: SemanticGraph,
    pub membership: Vec<usize>,
    pub betweenness: Vec<f64>,
}

fn check(graph: &SemanticGraph, communities: &CommunityAssignment, centrality: &CentralityScores) -> Result<()> {
    if graph.is_empty() {
        return Err(Error::invalid("cannot export an empty graph"));
    }
    if communities.membership.len() != graph.node_count() || centrality.scores.len() != graph.node_count() {
        return Err(Error::invalid("community and centrality vectors must cover every node"));
    }
    Ok(())
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn graphml(graph: &SemanticGraph, communities: &CommunityAssignment, centrality: &CentralityScores) -> String {
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    s.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
    s.push_str("  <key id=\"term\" for=\"node\" attr.name=\"term\" attr.type=\"string\"/>\n");
    s.push_str("  <key id=\"freq\" for=\"node\" attr.name=\"freq\" attr.type=\"long\"/>\n");
    s.push_str("  <key id=\"community\" for=\"node\" attr.name=\"community\" attr.type=\"int\"/>\n");
    s.push_str("  <key id=\"betweenness\" for=\"node\" attr.name=\"betweenness\" attr.type=\"double\"/>\n");
    s.push_str("  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"long\"/>\n");
    s.push_str("  <graph id=\"semnet\" edgedefault=\"directed\">\n");
    for (i, n) in graph.nodes().iter().enumerate() {
        let _ = writeln!(
            s,
            "    <node id=\"n{i}\"><data key=\"term\">{}</data><data key=\"freq\">{}</data><data key=\"community\">{}</data><data key=\"betweenness\">{:?}</data></node>",
            xml_escape(&n.term),
            n.freq,
            communities.membership[i],
            centrality.scores[i]
        );
    }
    for (k, (a, b, w)) in graph.edges().enumerate() {
        let _ = writeln!(
            s,
            "    <edge id=\"e{k}\" source=\"n{a}\" target=\"n{b}\"><data key=\"weight\">{w}</data></edge>"
        );
    }
    s.push_str("  </graph>\n</graphml>\n");
    s
}

fn dot(graph: &SemanticGraph, communities: &CommunityAssignment, centrality: &CentralityScores) -> String {
    let mut s = String::from("digraph semnet {\n");
    for (i, n) in graph.nodes().iter().enumerate() {
        let _ = writeln!(
            s,
            "  n{i} [label=\"{}\", freq={}, community={}, betweenness={:?}];",
            dot_escape(&n.term),
            n.freq,
            communities.membership[i],
            centrality.scores[i]
        );
    }
    for (a, b, w) in graph.edges() {
        let _ = writeln!(s, "  n{a} -> n{b} [weight={w}];");
    }
    s.push_str("}\n");
    s
}

fn json(graph: &SemanticGraph, communities: &CommunityAssignment, centrality: &CentralityScores) -> Result<String> {
    let doc = JsonGraph {
        nodes: graph
            .nodes()
            .iter()
            .enumerate()
            .map(|(i, n)| JsonNode {
                id: i,
                term: n.term.clone(),
                freq: n.freq,
                community: communities.membership[i],
                betweenness: centrality.scores[i],
            })
            .collect(),
        edges: graph.edges().map(|(s, t, w)| JsonEdge { s, t, w }).collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc)?;
    out.push('\n');
    Ok(out)
}

/// Render the network to a string in `format`.
pub fn write_graph(
    graph: &SemanticGraph,
    communities: &CommunityAssignment,
    centrality: &CentralityScores,
    format: GraphFormat,
) -> Result<String> {
    check(graph, communities, centrality)?;
    Ok(match format {
        GraphFormat::GraphMl => graphml(graph, communities, centrality),
        GraphFormat::Dot => dot(graph, communities, centrality),
        GraphFormat::JsonEdgeList => json(graph, communities, centrality)?,
    })
}

pub fn export_graph(
    graph: &SemanticGraph,
    communities: &CommunityAssignment,
    centrality: &CentralityScores,
    format: GraphFormat,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    let text = write_graph(graph, communities, centrality, format)?;
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    w.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

/// Read a JSON edge list written by [`export_graph`].
pub fn import_json_edgelist<R: Read>(reader: R) -> Result<NetworkExport> {
    let doc: JsonGraph = serde_json::from_reader(reader)?;
    let mut by_id: Vec<Option<&JsonNode>> = vec![None; doc.nodes.len()];
    for n in &doc.nodes {
        match by_id.get_mut(n.id) {
            Some(slot @ None) => *slot = Some(n),
            _ => return Err(Error::invalid(format!("node id {} is out of range or repeated", n.id))),
        }
    }
    let term = |id: usize| -> Result<String> {
        by_id
            .get(id)
            .copied()
            .flatten()
            .map(|n| n.term.clone())
            .ok_or_else(|| Error::invalid(format!("edge references unknown node {id}")))
    };
    let edges = doc
        .edges
        .iter()
        .map(|e| Ok((term(e.s)?, term(e.t)?, e.w)))
        .collect::<Result<Vec<_>>>()?;
    let graph = SemanticGraph::from_parts(
        doc.nodes
            .iter()
            .map(|n| Node {
                term: n.term.clone(),
                freq: n.freq,
            })
            .collect(),
        edges,
    )?;
    let mut membership = vec![0; graph.node_count()];
    let mut betweenness = vec![0.0; graph.node_count()];
    for n in &doc.nodes {
        let id = graph.node_id(&n.term).expect("node inserted above");
        membership[id] = n.community;
        betweenness[id] = n.betweenness;
    }
    Ok(NetworkExport {
        graph,
        membership,
        betweenness,
    })
}
