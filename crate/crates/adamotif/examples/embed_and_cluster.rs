//! Embed every community as a characteristic-function vector, then run
//! the two-level clustering that picks representative subgraphs.
//!
//! Run with: cargo run --example embed_and_cluster

use std::sync::Arc;

use adamotif::{
    cluster_representatives, cluster_subgraphs, detect_communities, embed_subgraph,
    embedding_distance, load_edge_list, ApOptions, EmbeddingParams, InputFormat,
};

fn main() -> adamotif::Result<()> {
    let data = std::fs::read(concat!(env!("CARGO_MANIFEST_DIR"), "/data/lesmis.txt"))?;
    let (graph, _) = load_edge_list(data.as_slice(), InputFormat::Whitespace)?;
    let graph = Arc::new(graph);
    let partition = detect_communities(&graph, 1.0, 42)?;
    let communities = partition.communities(&graph);

    let params = EmbeddingParams::default();
    let embeddings: Vec<_> = communities
        .iter()
        .map(|s| embed_subgraph(s, &params))
        .collect::<adamotif::Result<_>>()?;
    println!(
        "{} communities embedded into {}-dimensional vectors",
        embeddings.len(),
        params.dim()
    );
    for i in 0..embeddings.len() {
        for j in (i + 1)..embeddings.len() {
            let d = embedding_distance(&embeddings[i], &embeddings[j])?;
            println!("  distance({i}, {j}) = {d:.4}");
        }
    }

    let opts = ApOptions::default();
    let level1 = cluster_subgraphs(&embeddings, &opts, 42)?;
    println!("first level: {} categories", level1.cluster_count());
    for c in 0..level1.cluster_count() {
        println!(
            "  category {c}: members {:?}, representative = community {}",
            level1.members(c),
            level1.exemplar_of[c]
        );
    }

    let level2 = cluster_representatives(&level1.exemplar_of, &embeddings, &opts, 43)?;
    println!("second level: {} classes of representatives", level2.cluster_count());
    for c in 0..level2.cluster_count() {
        let members: Vec<usize> = level2
            .members(c)
            .into_iter()
            .map(|pos| level1.exemplar_of[pos])
            .collect();
        println!("  class {c}: representative communities {members:?}");
    }
    Ok(())
}
