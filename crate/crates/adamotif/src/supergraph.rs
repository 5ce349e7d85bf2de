//! Super-graph synthesis for a cluster of representative subgraphs.
//!
//! The largest member is the basis; the remaining members merge one at a
//! time in descending size. Matched nodes map onto their partners in the
//! current super-graph, unmatched nodes are added as new super-graph
//! nodes, and every source edge induces a super-graph edge under the
//! provenance map. The super-graph exists only to seed a shared layout.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::alignment::{align, match_nodes};
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder, NodeId};

/// Alignment knobs used during merging.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
#[serde(default)]
pub struct AlignParams {
    pub rank: usize,
    pub quantile_threshold: f64,
}

impl Default for AlignParams {
    fn default() -> Self {
        AlignParams {
            rank: 8,
            quantile_threshold: 0.5,
        }
    }
}

/// Union-with-identification of one representative cluster.
#[derive(Debug, Clone)]
pub struct SuperGraph {
    graph: Graph,
    /// Per input member (original order): total injective map from the
    /// member's node ids to super-graph node ids.
    provenance: Vec<BTreeMap<NodeId, NodeId>>,
    basis: usize,
    warnings: Vec<String>,
}

impl SuperGraph {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn provenance(&self, member: usize) -> &BTreeMap<NodeId, NodeId> {
        &self.provenance[member]
    }

    pub fn member_count(&self) -> usize {
        self.provenance.len()
    }

    /// Index (in input order) of the member used as the basis.
    pub fn basis(&self) -> usize {
        self.basis
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }
}

/// Synthesizes the super-graph of a representative cluster.
///
/// A singleton cluster returns the member itself with identity
/// provenance. A merge that finds zero matches keeps the member's image
/// as a disconnected island and records a warning instead of failing.
pub fn synthesize_supergraph(members: &[Graph], params: &AlignParams) -> Result<SuperGraph> {
    if members.is_empty() {
        return Err(Error::domain("cannot synthesize a super-graph from zero members"));
    }
    for (i, m) in members.iter().enumerate() {
        if m.is_empty() {
            return Err(Error::domain(format!("member {i} is an empty graph")));
        }
    }

    if members.len() == 1 {
        let graph = members[0].clone();
        let identity: BTreeMap<NodeId, NodeId> =
            graph.nodes().map(|v| (v.clone(), v.clone())).collect();
        return Ok(SuperGraph {
            graph,
            provenance: vec![identity],
            basis: 0,
            warnings: Vec::new(),
        });
    }

    // Basis = largest member; merge the rest in descending size. Ties
    // resolve toward the lower input index.
    let mut order: Vec<usize> = (0..members.len()).collect();
    order.sort_by(|&a, &b| {
        members[b]
            .node_count()
            .cmp(&members[a].node_count())
            .then(a.cmp(&b))
    });
    let basis = order[0];

    let mut provenance: Vec<BTreeMap<NodeId, NodeId>> = vec![BTreeMap::new(); members.len()];
    provenance[basis] = members[basis]
        .nodes()
        .map(|v| (v.clone(), v.clone()))
        .collect();

    let mut current = members[basis].clone();
    let mut warnings = Vec::new();

    for &mi in &order[1..] {
        let member = &members[mi];
        let sim = align(&current, member, params.rank)?;
        let matching = match_nodes(&sim, &current, member, params.quantile_threshold)?;
        if matching.is_empty() {
            warnings.push(format!(
                "member {mi} matched no super-graph node; added as a disconnected island"
            ));
        }

        let mut map: BTreeMap<NodeId, NodeId> = BTreeMap::new();
        for (super_node, member_node) in matching.pairs() {
            map.insert(member_node.clone(), super_node.clone());
        }
        for unmatched in matching.unmatched_b() {
            // Community node ids are globally unique in the parent graph,
            // so unmatched nodes keep their own id inside the super-graph.
            map.insert(unmatched.clone(), unmatched.clone());
        }

        let mut builder = GraphBuilder::new();
        for v in current.nodes() {
            builder.add_node(v.as_str());
        }
        for (a, b) in current.edges() {
            builder.add_edge(a.as_str(), b.as_str());
        }
        for v in member.nodes() {
            builder.add_node(map[v].as_str());
        }
        for (a, b) in member.edges() {
            builder.add_edge(map[a].as_str(), map[b].as_str());
        }
        let (next, _) = builder.build();

        let expected = current.node_count() + matching.unmatched_b().len();
        debug_assert_eq!(next.node_count(), expected, "node-count identity violated");
        current = next;
        provenance[mi] = map;
    }

    Ok(SuperGraph {
        graph: current,
        provenance,
        basis,
        warnings,
    })
}
