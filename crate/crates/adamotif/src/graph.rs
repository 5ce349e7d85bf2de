//! Graph data model, ingestion and subgraph extraction.
//!
//! Graphs are undirected and simple: no self-loops, no duplicate edges.
//! Node identifiers are kept as the input strings; internal dense indices
//! are derived and never exposed.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::Read;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Opaque node identifier, stable across the whole pipeline run.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Self {
        NodeId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId(s.to_owned())
    }
}

impl From<String> for NodeId {
    fn from(s: String) -> Self {
        NodeId(s)
    }
}

/// Undirected simple graph. Immutable after construction.
#[derive(Debug, Clone)]
pub struct Graph {
    ids: Vec<NodeId>,
    index: HashMap<String, usize>,
    adj: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    labels: Vec<Option<String>>,
}

/// Input formats accepted by [`load_edge_list`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputFormat {
    /// One edge per line, two whitespace-separated tokens, `#` comments.
    Whitespace,
    /// `source,target` columns, header optional.
    Csv,
    /// `{"nodes":[{"id":..,"label":..}],"links":[{"source":..,"target":..}]}`.
    JsonNodeLink,
}

/// Counters for lines that were dropped during ingestion.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadStats {
    pub self_loops_dropped: usize,
    pub duplicate_edges_dropped: usize,
}

/// Accumulates nodes and edges, then seals them into a [`Graph`].
#[derive(Debug, Default)]
pub struct GraphBuilder {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    edges: HashSet<(usize, usize)>,
    labels: HashMap<usize, String>,
    stats: LoadStats,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, id: &str) -> usize {
        if let Some(&i) = self.index.get(id) {
            return i;
        }
        let i = self.ids.len();
        self.ids.push(id.to_owned());
        self.index.insert(id.to_owned(), i);
        i
    }

    pub fn set_label(&mut self, id: &str, label: &str) {
        let i = self.add_node(id);
        self.labels.insert(i, label.to_owned());
    }

    /// Adds an undirected edge. Self-loops are dropped and counted;
    /// duplicates collapse to multiplicity one.
    pub fn add_edge(&mut self, a: &str, b: &str) {
        let ia = self.add_node(a);
        let ib = self.add_node(b);
        if ia == ib {
            self.stats.self_loops_dropped += 1;
            return;
        }
        let key = (ia.min(ib), ia.max(ib));
        if !self.edges.insert(key) {
            self.stats.duplicate_edges_dropped += 1;
        }
    }

    pub fn build(self) -> (Graph, LoadStats) {
        // Canonical node order: sorted id strings. All internal indices
        // are relative to this order.
        let mut order: Vec<usize> = (0..self.ids.len()).collect();
        order.sort_by(|&a, &b| self.ids[a].cmp(&self.ids[b]));
        let mut old_to_new = vec![0usize; self.ids.len()];
        for (new, &old) in order.iter().enumerate() {
            old_to_new[old] = new;
        }

        let ids: Vec<NodeId> = order.iter().map(|&o| NodeId(self.ids[o].clone())).collect();
        let index: HashMap<String, usize> = ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.0.clone(), i))
            .collect();
        let mut labels = vec![None; ids.len()];
        for (old, label) in self.labels {
            labels[old_to_new[old]] = Some(label);
        }

        let mut edges: Vec<(usize, usize)> = self
            .edges
            .into_iter()
            .map(|(a, b)| {
                let (a, b) = (old_to_new[a], old_to_new[b]);
                (a.min(b), a.max(b))
            })
            .collect();
        edges.sort_unstable();

        let mut adj = vec![Vec::new(); ids.len()];
        for &(a, b) in &edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for nbrs in &mut adj {
            nbrs.sort_unstable();
        }

        (
            Graph {
                ids,
                index,
                adj,
                edges,
                labels,
            },
            self.stats,
        )
    }
}

impl Graph {
    /// Builds a graph from an id-pair edge list (test and fixture helper).
    pub fn from_edges<'a, I>(edges: I) -> Graph
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut b = GraphBuilder::new();
        for (u, v) in edges {
            b.add_edge(u, v);
        }
        b.build().0
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = &NodeId> {
        self.ids.iter()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&NodeId, &NodeId)> {
        self.edges.iter().map(|&(a, b)| (&self.ids[a], &self.ids[b]))
    }

    pub fn contains(&self, v: &NodeId) -> bool {
        self.index.contains_key(v.as_str())
    }

    pub fn label(&self, v: &NodeId) -> Option<&str> {
        let i = *self.index.get(v.as_str())?;
        self.labels[i].as_deref()
    }

    /// Number of incident edges.
    pub fn degree(&self, v: &NodeId) -> Result<usize> {
        let i = self
            .idx(v)
            .ok_or_else(|| Error::domain(format!("unknown node `{v}`")))?;
        Ok(self.adj[i].len())
    }

    pub fn neighbors(&self, v: &NodeId) -> Result<impl Iterator<Item = &NodeId>> {
        let i = self
            .idx(v)
            .ok_or_else(|| Error::domain(format!("unknown node `{v}`")))?;
        Ok(self.adj[i].iter().map(move |&j| &self.ids[j]))
    }

    pub fn has_edge(&self, a: &NodeId, b: &NodeId) -> bool {
        match (self.idx(a), self.idx(b)) {
            (Some(i), Some(j)) => self.edges.binary_search(&(i.min(j), i.max(j))).is_ok(),
            _ => false,
        }
    }

    pub(crate) fn idx(&self, v: &NodeId) -> Option<usize> {
        self.index.get(v.as_str()).copied()
    }

    pub(crate) fn id_of(&self, i: usize) -> &NodeId {
        &self.ids[i]
    }

    pub(crate) fn adj_idx(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub(crate) fn edges_idx(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub(crate) fn degree_idx(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub(crate) fn has_edge_idx(&self, i: usize, j: usize) -> bool {
        self.edges.binary_search(&(i.min(j), i.max(j))).is_ok()
    }

    /// Lossless node-link serialization (keeps isolated nodes and labels).
    pub fn to_node_link_json(&self) -> Vec<u8> {
        let doc = NodeLinkDoc {
            nodes: self
                .ids
                .iter()
                .enumerate()
                .map(|(i, id)| NodeLinkNode {
                    id: JsonToken::Str(id.0.clone()),
                    label: self.labels[i].clone(),
                })
                .collect(),
            links: self
                .edges
                .iter()
                .map(|&(a, b)| NodeLinkEdge {
                    source: JsonToken::Str(self.ids[a].0.clone()),
                    target: JsonToken::Str(self.ids[b].0.clone()),
                })
                .collect(),
        };
        serde_json::to_vec_pretty(&doc).expect("node-link document serializes")
    }

    /// Connected components, each a sorted list of internal indices.
    pub(crate) fn components_idx(&self) -> Vec<Vec<usize>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.node_count() <= 1 || self.components_idx().len() == 1
    }
}

/// Node-induced subgraph of a parent [`Graph`].
#[derive(Debug, Clone)]
pub struct Subgraph {
    parent: Arc<Graph>,
    members: Vec<usize>,
}

impl Subgraph {
    pub fn parent(&self) -> &Arc<Graph> {
        &self.parent
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> impl Iterator<Item = &NodeId> {
        self.members.iter().map(|&i| self.parent.id_of(i))
    }

    pub fn contains(&self, v: &NodeId) -> bool {
        match self.parent.idx(v) {
            Some(i) => self.members.binary_search(&i).is_ok(),
            None => false,
        }
    }

    /// Parent edges with both endpoints inside the member set.
    pub fn induced_edges(&self) -> Vec<(NodeId, NodeId)> {
        let member_set: HashSet<usize> = self.members.iter().copied().collect();
        self.parent
            .edges_idx()
            .iter()
            .filter(|(a, b)| member_set.contains(a) && member_set.contains(b))
            .map(|&(a, b)| (self.parent.id_of(a).clone(), self.parent.id_of(b).clone()))
            .collect()
    }

    pub fn induced_edge_count(&self) -> usize {
        let member_set: HashSet<usize> = self.members.iter().copied().collect();
        self.parent
            .edges_idx()
            .iter()
            .filter(|(a, b)| member_set.contains(a) && member_set.contains(b))
            .count()
    }

    /// Materializes the induced subgraph as a standalone [`Graph`]
    /// keeping the original node identifiers.
    pub fn to_graph(&self) -> Graph {
        let mut b = GraphBuilder::new();
        for &i in &self.members {
            b.add_node(self.parent.id_of(i).as_str());
            if let Some(label) = self.parent.labels[i].as_deref() {
                b.set_label(self.parent.id_of(i).as_str(), label);
            }
        }
        for (u, v) in self.induced_edges() {
            b.add_edge(u.as_str(), v.as_str());
        }
        b.build().0
    }
}

/// Extracts the node-induced subgraph on `members`.
pub fn induced_subgraph(g: &Arc<Graph>, members: &[NodeId]) -> Result<Subgraph> {
    let mut idxs = Vec::with_capacity(members.len());
    for m in members {
        let i = g
            .idx(m)
            .ok_or_else(|| Error::domain(format!("node `{m}` is not in the graph")))?;
        idxs.push(i);
    }
    idxs.sort_unstable();
    idxs.dedup();
    Ok(Subgraph {
        parent: Arc::clone(g),
        members: idxs,
    })
}

pub(crate) fn subgraph_from_indices(g: &Arc<Graph>, mut idxs: Vec<usize>) -> Subgraph {
    idxs.sort_unstable();
    idxs.dedup();
    Subgraph {
        parent: Arc::clone(g),
        members: idxs,
    }
}

#[derive(Serialize, Deserialize)]
struct NodeLinkDoc {
    nodes: Vec<NodeLinkNode>,
    links: Vec<NodeLinkEdge>,
}

#[derive(Serialize, Deserialize)]
struct NodeLinkNode {
    id: JsonToken,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct NodeLinkEdge {
    source: JsonToken,
    target: JsonToken,
}

/// Node ids in node-link JSON may be strings or numbers; both normalize
/// to their string token.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonToken {
    Str(String),
    Num(i64),
}

impl JsonToken {
    fn token(&self) -> String {
        match self {
            JsonToken::Str(s) => s.clone(),
            JsonToken::Num(n) => n.to_string(),
        }
    }
}

/// Reads an edge list in one of the supported formats.
///
/// Duplicate edges are deduplicated and self-loops dropped; both are
/// counted in the returned [`LoadStats`]. An empty stream yields an
/// empty graph.
pub fn load_edge_list(mut source: impl Read, format: InputFormat) -> Result<(Graph, LoadStats)> {
    let mut text = String::new();
    source
        .read_to_string(&mut text)
        .map_err(|e| Error::Parse {
            line: 0,
            message: format!("input is not valid UTF-8: {e}"),
        })?;
    let mut b = GraphBuilder::new();
    match format {
        InputFormat::Whitespace => {
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let tokens: Vec<&str> = line.split_whitespace().collect();
                if tokens.len() != 2 {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        message: format!("expected 2 tokens, found {}", tokens.len()),
                    });
                }
                b.add_edge(tokens[0], tokens[1]);
            }
        }
        InputFormat::Csv => {
            let mut reader = csv::ReaderBuilder::new()
                .has_headers(false)
                .flexible(true)
                .from_reader(text.as_bytes());
            for (recno, record) in reader.records().enumerate() {
                let record = record.map_err(|e| Error::Parse {
                    line: recno + 1,
                    message: e.to_string(),
                })?;
                let fields: Vec<&str> = record.iter().map(str::trim).collect();
                if recno == 0
                    && fields.len() == 2
                    && fields[0].eq_ignore_ascii_case("source")
                    && fields[1].eq_ignore_ascii_case("target")
                {
                    continue; // optional header
                }
                if fields.is_empty() || (fields.len() == 1 && fields[0].is_empty()) {
                    continue;
                }
                if fields.len() != 2 {
                    return Err(Error::Parse {
                        line: recno + 1,
                        message: format!("expected 2 columns, found {}", fields.len()),
                    });
                }
                b.add_edge(fields[0], fields[1]);
            }
        }
        InputFormat::JsonNodeLink => {
            let doc: NodeLinkDoc = serde_json::from_str(&text).map_err(|e| Error::Parse {
                line: e.line(),
                message: e.to_string(),
            })?;
            for node in &doc.nodes {
                let id = node.id.token();
                b.add_node(&id);
                if let Some(label) = &node.label {
                    b.set_label(&id, label);
                }
            }
            for link in &doc.links {
                b.add_edge(&link.source.token(), &link.target.token());
            }
        }
    }
    Ok(b.build())
}
