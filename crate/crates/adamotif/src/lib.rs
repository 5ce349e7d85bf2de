//! Batch graph simplification with adaptive motifs.
//!
//! A large undirected graph is partitioned into communities; structurally
//! similar communities are clustered around representative subgraphs and
//! laid out through shared super-graphs, so similarities show as shared
//! coordinates and differences as node decorations. Each community then
//! collapses into a motif (a colored concave contour scaled by node
//! count), inter-community edges aggregate into grayscale-weighted
//! bundled edges, and the motifs are packed into a final scene.
//!
//! See the `examples/` directory for one runnable example per stage,
//! from [`detect_communities`] through [`run_pipeline`].

mod alignment;
mod assembly;
mod bundling;
mod clustering;
mod community;
mod config;
mod embedding;
mod error;
mod geometry;
mod graph;
mod layout;
mod motif;
mod pipeline;
mod render;
mod supergraph;

pub use alignment::{align, match_nodes, AlignmentMatching, SimilarityMatrix};
pub use assembly::{
    aggregate_edges, contour_overlap_fraction, global_motif_layout, GlobalLayoutParams, MotifEdge,
    MotifScene, SceneMetadata, SCENE_SCHEMA_VERSION,
};
pub use bundling::{bundle_edges, BundlingParams};
pub use clustering::{
    affinity_propagation, cluster_representatives, cluster_subgraphs, ApOptions,
    ClusterAssignment, ClusterLevel, Preference, SquareMatrix,
};
pub use community::{detect_communities, modularity, CommunityPartition};
pub use config::{
    parse_canvas, sibling_path, ClusteringConfig, DumpFlags, OutputFormat, PipelineConfig,
    PipelineMode, DEFAULT_SEED,
};
pub use embedding::{embed_subgraph, embedding_distance, EmbeddingParams, EmbeddingVector};
pub use error::{Error, Result};
pub use geometry::{alpha_shape, buffer_polygon, default_alpha, Contour, Polygon};
pub use graph::{
    induced_subgraph, load_edge_list, Graph, GraphBuilder, InputFormat, LoadStats, NodeId,
    Subgraph,
};
pub use layout::{
    difference_layout, force_layout, force_layout_observed, layout_energy,
    representative_layouts, DecoratedLayout, LayoutParams, NodeEncoding, Positions, RingLevel,
};
pub use motif::{
    build_motif, AlphaChoice, Motif, MotifConfig, MotifInternalEdge, MotifNode, DEFAULT_PALETTE,
};
pub use pipeline::{
    run_pipeline, simplify_graph, MatchingStats, PipelineArtifacts, RunReport, StageDuration,
};
pub use render::{render, scene_from_json, RenderFormat, RenderOptions};
pub use supergraph::{synthesize_supergraph, AlignParams, SuperGraph};
