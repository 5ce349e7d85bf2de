//! Detect communities in the Les Miserables co-occurrence network and
//! score the partition.
//!
//! Run with: cargo run --example communities

use std::sync::Arc;

use adamotif::{detect_communities, load_edge_list, modularity, InputFormat};

fn main() -> adamotif::Result<()> {
    let data = std::fs::read(concat!(env!("CARGO_MANIFEST_DIR"), "/data/lesmis.txt"))?;
    let (graph, stats) = load_edge_list(data.as_slice(), InputFormat::Whitespace)?;
    let graph = Arc::new(graph);
    println!(
        "loaded {} nodes, {} edges ({} self-loops dropped, {} duplicates)",
        graph.node_count(),
        graph.edge_count(),
        stats.self_loops_dropped,
        stats.duplicate_edges_dropped
    );

    let partition = detect_communities(&graph, 1.0, 42)?;
    let q = modularity(&graph, &partition, 1.0)?;
    println!(
        "{} communities, modularity {:.4}",
        partition.community_count(),
        q
    );

    for (c, subgraph) in partition.communities(&graph).iter().enumerate() {
        let mut members: Vec<&str> = subgraph.members().map(|m| m.as_str()).collect();
        members.sort_unstable();
        let preview: Vec<&str> = members.iter().take(5).copied().collect();
        println!(
            "  community {c}: {} nodes, {} internal edges, e.g. {}",
            subgraph.len(),
            subgraph.induced_edge_count(),
            preview.join(", ")
        );
    }
    Ok(())
}
