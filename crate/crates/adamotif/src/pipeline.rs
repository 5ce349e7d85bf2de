//! End-to-end pipeline: load, partition, embed, cluster, align, lay out,
//! build motifs, assemble and render.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::alignment::{align, match_nodes, AlignmentMatching};
use crate::assembly::{
    aggregate_edges, global_motif_layout, GlobalLayoutParams, MotifScene, SceneMetadata,
    SCENE_SCHEMA_VERSION,
};
use crate::bundling::{bundle_edges, BundlingParams};
use crate::clustering::{cluster_representatives, cluster_subgraphs, ClusterAssignment};
use crate::community::{derive_seed, detect_communities, CommunityPartition};
use crate::config::{sibling_path, OutputFormat, PipelineConfig, PipelineMode};
use crate::embedding::{embed_graph, EmbeddingVector};
use crate::error::{Error, Result};
use crate::graph::{load_edge_list, Graph, LoadStats, NodeId};
use crate::layout::{
    difference_layout, force_layout, representative_layouts, DecoratedLayout, LayoutParams,
    Positions,
};
use crate::motif::{build_motif, Motif};
use crate::render::{render, RenderFormat, RenderOptions};
use crate::supergraph::{synthesize_supergraph, SuperGraph};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageDuration {
    pub stage: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingStats {
    pub alignments_run: usize,
    pub matched_pairs: usize,
    pub unmatched_representative_nodes: usize,
    pub unmatched_individual_nodes: usize,
}

/// Wall-clock and counting summary of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub dataset: String,
    pub mode: String,
    pub seed: u64,
    pub node_count: usize,
    pub edge_count: usize,
    pub community_count: usize,
    pub first_level_clusters: usize,
    pub second_level_clusters: usize,
    pub matching: MatchingStats,
    pub stages: Vec<StageDuration>,
    pub warnings: Vec<String>,
}

impl RunReport {
    pub fn total_seconds(&self) -> f64 {
        self.stages.iter().map(|s| s.seconds).sum()
    }
}

/// Intermediate artifacts kept for dumps and tests.
pub struct PipelineArtifacts {
    pub graph: Arc<Graph>,
    pub partition: CommunityPartition,
    pub embeddings: Vec<EmbeddingVector>,
    pub subgraph_clusters: ClusterAssignment,
    pub representative_clusters: ClusterAssignment,
    pub representatives: Vec<usize>,
    pub supergraphs: Vec<SuperGraph>,
}

struct StageClock {
    stages: Vec<StageDuration>,
    current: Instant,
}

impl StageClock {
    fn start() -> Self {
        StageClock {
            stages: Vec::new(),
            current: Instant::now(),
        }
    }

    fn lap(&mut self, stage: &str) {
        let now = Instant::now();
        self.stages.push(StageDuration {
            stage: stage.to_owned(),
            seconds: now.duration_since(self.current).as_secs_f64(),
        });
        self.current = now;
    }
}

fn stage_err(stage: &'static str, clock: &StageClock, source: Error) -> Error {
    let elapsed = clock
        .stages
        .iter()
        .map(|s| s.seconds)
        .sum::<f64>()
        + clock.current.elapsed().as_secs_f64();
    Error::Stage {
        stage,
        elapsed,
        source: Box::new(source),
    }
}

/// Runs the full pipeline on an in-memory graph.
pub fn simplify_graph(
    graph: &Arc<Graph>,
    dataset: &str,
    cfg: &PipelineConfig,
) -> Result<(MotifScene, RunReport, PipelineArtifacts)> {
    let mut clock = StageClock::start();
    let mut warnings: Vec<String> = Vec::new();
    let seed = cfg.seed;

    // Subgraph partitioning.
    let partition = detect_communities(graph, cfg.resolution, seed)
        .map_err(|e| stage_err("communities", &clock, e))?;
    let communities = partition.communities(graph);
    let community_graphs: Vec<Graph> = communities.iter().map(|s| s.to_graph()).collect();
    clock.lap("communities");

    // Whole-subgraph embeddings.
    let embeddings: Vec<EmbeddingVector> = community_graphs
        .par_iter()
        .map(|g| embed_graph(g, &cfg.embedding))
        .collect();
    clock.lap("embedding");

    // Two-level clustering.
    let ap_opts = cfg.clustering.to_options();
    let subgraph_clusters = cluster_subgraphs(&embeddings, &ap_opts, derive_seed(seed, 1))
        .map_err(|e| stage_err("clustering", &clock, e))?;
    if !subgraph_clusters.converged {
        warnings.push("subgraph clustering did not converge; using last assignment".into());
    }
    let representatives: Vec<usize> = subgraph_clusters.exemplar_of.clone();
    let representative_clusters =
        cluster_representatives(&representatives, &embeddings, &ap_opts, derive_seed(seed, 2))
            .map_err(|e| stage_err("clustering", &clock, e))?;
    if !representative_clusters.converged {
        warnings.push("representative clustering did not converge; using last assignment".into());
    }
    clock.lap("clustering");

    // Per-community internal layouts.
    let (decorations, supergraphs, matching_stats) = match cfg.mode {
        PipelineMode::Adamotif => adamotif_layouts(
            &community_graphs,
            &subgraph_clusters,
            &representatives,
            &representative_clusters,
            cfg,
            &mut warnings,
        )
        .map_err(|e| stage_err("subgraph-layout", &clock, e))?,
        PipelineMode::Primitive => {
            let decorations = primitive_layouts(&community_graphs, cfg);
            (decorations, Vec::new(), MatchingStats::default())
        }
    };
    clock.lap("subgraph-layout");

    // Motifs, one per community.
    let motifs: Vec<Motif> = decorations
        .par_iter()
        .enumerate()
        .map(|(i, (source, layout))| {
            build_motif(
                i,
                source,
                layout,
                subgraph_clusters.member_of[i],
                &cfg.motif,
                community_graphs[i].node_count(),
            )
        })
        .collect::<Result<_>>()
        .map_err(|e| stage_err("motifs", &clock, e))?;
    clock.lap("motifs");

    // Edge aggregation, global placement, bundling.
    let mut edges = aggregate_edges(graph, &partition);
    let global_params = GlobalLayoutParams {
        canvas: cfg.canvas,
        seed: derive_seed(seed, 3),
        ..GlobalLayoutParams::default()
    };
    let (anchors, canvas) = global_motif_layout(&motifs, &edges, &global_params)
        .map_err(|e| stage_err("assembly", &clock, e))?;
    if canvas != cfg.canvas {
        warnings.push(format!(
            "canvas auto-grew from {}x{} to {}x{} to fit the motifs",
            cfg.canvas.0, cfg.canvas.1, canvas.0, canvas.1
        ));
    }
    let mut motifs = motifs;
    for (motif, &(x, y)) in motifs.iter_mut().zip(&anchors) {
        let (ax, ay) = motif.anchor;
        motif.translate(x - ax, y - ay);
    }
    bundle_edges(&mut edges, &motifs, &BundlingParams::default());
    clock.lap("assembly");

    let scene = MotifScene {
        schema_version: SCENE_SCHEMA_VERSION,
        canvas,
        metadata: SceneMetadata {
            dataset: dataset.to_owned(),
            seed,
            mode: match cfg.mode {
                PipelineMode::Adamotif => "adamotif".to_owned(),
                PipelineMode::Primitive => "primitive".to_owned(),
            },
            parameters: cfg.parameter_snapshot(),
        },
        motifs,
        edges,
    };

    let report = RunReport {
        dataset: dataset.to_owned(),
        mode: scene.metadata.mode.clone(),
        seed,
        node_count: graph.node_count(),
        edge_count: graph.edge_count(),
        community_count: partition.community_count(),
        first_level_clusters: subgraph_clusters.cluster_count(),
        second_level_clusters: representative_clusters.cluster_count(),
        matching: matching_stats,
        stages: clock.stages,
        warnings,
    };

    let artifacts = PipelineArtifacts {
        graph: Arc::clone(graph),
        partition,
        embeddings,
        subgraph_clusters,
        representative_clusters,
        representatives,
        supergraphs,
    };
    Ok((scene, report, artifacts))
}

type CommunityDecoration = (Graph, DecoratedLayout);

/// Similarity-aware representative layouts plus difference-aware
/// individual layouts.
fn adamotif_layouts(
    community_graphs: &[Graph],
    subgraph_clusters: &ClusterAssignment,
    representatives: &[usize],
    representative_clusters: &ClusterAssignment,
    cfg: &PipelineConfig,
    warnings: &mut Vec<String>,
) -> Result<(Vec<CommunityDecoration>, Vec<SuperGraph>, MatchingStats)> {
    let seed = cfg.seed;

    // One super-graph per representative cluster, each laid out once.
    let rep_cluster_members: Vec<Vec<usize>> = (0..representative_clusters.cluster_count())
        .map(|c| {
            representative_clusters
                .members(c)
                .into_iter()
                .map(|pos| representatives[pos])
                .collect()
        })
        .collect();

    let supergraph_results: Vec<(SuperGraph, Vec<Positions>)> = rep_cluster_members
        .par_iter()
        .enumerate()
        .map(|(c, member_communities)| {
            let member_graphs: Vec<Graph> = member_communities
                .iter()
                .map(|&i| community_graphs[i].clone())
                .collect();
            let sg = synthesize_supergraph(&member_graphs, &cfg.alignment)?;
            let params = LayoutParams {
                seed: derive_seed(seed, 1000 + c),
                ..cfg.layout.clone()
            };
            let layouts = representative_layouts(&sg, &params);
            Ok((sg, layouts))
        })
        .collect::<Result<_>>()?;

    // Representative community -> its positions from the super-graph.
    let mut rep_positions: BTreeMap<usize, Positions> = BTreeMap::new();
    let mut supergraphs = Vec::with_capacity(supergraph_results.len());
    for (c, (sg, layouts)) in supergraph_results.into_iter().enumerate() {
        for w in sg.warnings() {
            warnings.push(format!("representative cluster {c}: {w}"));
        }
        for (slot, &community) in rep_cluster_members[c].iter().enumerate() {
            rep_positions.insert(community, layouts[slot].clone());
        }
        supergraphs.push(sg);
    }

    // Every community receives either its representative layout (if it is
    // the exemplar) or a difference-aware decoration against it.
    let results: Vec<(CommunityDecoration, MatchingStats)> = (0..community_graphs.len())
        .into_par_iter()
        .map(|i| {
            let cluster = subgraph_clusters.member_of[i];
            let rep = subgraph_clusters.exemplar_of[cluster];
            let rep_graph = &community_graphs[rep];
            let positions = &rep_positions[&rep];
            if i == rep {
                let decoration = DecoratedLayout::plain(positions.clone());
                return Ok(((rep_graph.clone(), decoration), MatchingStats::default()));
            }
            let individual = &community_graphs[i];
            let sim = align(rep_graph, individual, cfg.alignment.rank)?;
            let matching: AlignmentMatching =
                match_nodes(&sim, rep_graph, individual, cfg.alignment.quantile_threshold)?;
            let stats = MatchingStats {
                alignments_run: 1,
                matched_pairs: matching.len(),
                unmatched_representative_nodes: matching.unmatched_a().len(),
                unmatched_individual_nodes: matching.unmatched_b().len(),
            };
            let decoration = difference_layout(individual, rep_graph, positions, &matching)?;
            Ok(((rep_graph.clone(), decoration), stats))
        })
        .collect::<Result<_>>()?;

    let mut decorations = Vec::with_capacity(results.len());
    let mut totals = MatchingStats::default();
    for (decoration, stats) in results {
        totals.alignments_run += stats.alignments_run;
        totals.matched_pairs += stats.matched_pairs;
        totals.unmatched_representative_nodes += stats.unmatched_representative_nodes;
        totals.unmatched_individual_nodes += stats.unmatched_individual_nodes;
        decorations.push(decoration);
    }
    Ok((decorations, supergraphs, totals))
}

/// Primitive mode: every community gets its own plain force layout; no
/// alignment, no super-graphs, no decorations.
fn primitive_layouts(community_graphs: &[Graph], cfg: &PipelineConfig) -> Vec<CommunityDecoration> {
    community_graphs
        .par_iter()
        .enumerate()
        .map(|(i, g)| {
            let params = LayoutParams {
                seed: derive_seed(cfg.seed, 2000 + i),
                ..cfg.layout.clone()
            };
            let positions = force_layout(g, &params);
            (g.clone(), DecoratedLayout::plain(positions))
        })
        .collect()
}

/// Runs the pipeline from a config: reads the input file, writes the
/// rendered outputs, dumps and report, and returns the scene.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<(MotifScene, RunReport)> {
    cfg.validate()?;
    let bytes = fs::read(&cfg.input)?;
    let (graph, load_stats) = load_edge_list(bytes.as_slice(), cfg.effective_input_format())?;
    let dataset = cfg
        .input
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("graph")
        .to_owned();

    let graph = Arc::new(graph);
    let (scene, mut report, artifacts) = simplify_graph(&graph, &dataset, cfg)?;
    push_load_warnings(&mut report, load_stats);

    write_outputs(&scene, cfg)?;
    write_dumps(&artifacts, cfg)?;
    if let Some(path) = &cfg.report {
        fs::write(path, serde_json::to_vec_pretty(&report)?)?;
    }
    Ok((scene, report))
}

fn push_load_warnings(report: &mut RunReport, stats: LoadStats) {
    if stats.self_loops_dropped > 0 {
        report
            .warnings
            .push(format!("dropped {} self-loop line(s)", stats.self_loops_dropped));
    }
    if stats.duplicate_edges_dropped > 0 {
        report.warnings.push(format!(
            "deduplicated {} repeated edge line(s)",
            stats.duplicate_edges_dropped
        ));
    }
}

fn write_outputs(scene: &MotifScene, cfg: &PipelineConfig) -> Result<()> {
    let opts = RenderOptions {
        label_threshold: cfg.label_threshold,
    };
    let write = |format: RenderFormat, path: &Path| -> Result<()> {
        let bytes = render(scene, format, &opts)?;
        fs::write(path, bytes)?;
        Ok(())
    };
    match cfg.format {
        OutputFormat::Svg => write(RenderFormat::Svg, &cfg.output),
        OutputFormat::Json => write(RenderFormat::Json, &cfg.output),
        OutputFormat::Both => {
            write(RenderFormat::Svg, &cfg.output.with_extension("svg"))?;
            write(RenderFormat::Json, &cfg.output.with_extension("json"))
        }
    }
}

fn write_dumps(artifacts: &PipelineArtifacts, cfg: &PipelineConfig) -> Result<()> {
    if cfg.dump.partition {
        let map: BTreeMap<NodeId, usize> = artifacts.partition.assignment_map(&artifacts.graph);
        fs::write(
            sibling_path(&cfg.output, "partition.json"),
            serde_json::to_vec_pretty(&map)?,
        )?;
    }
    if cfg.dump.embeddings {
        fs::write(
            sibling_path(&cfg.output, "embeddings.json"),
            serde_json::to_vec_pretty(&artifacts.embeddings)?,
        )?;
    }
    if cfg.dump.clusters {
        #[derive(Serialize)]
        struct ClusterDump {
            id: usize,
            exemplar: usize,
            members: Vec<usize>,
        }
        #[derive(Serialize)]
        struct ClustersDump {
            subgraph_level: Vec<ClusterDump>,
            representative_level: Vec<ClusterDump>,
        }
        let level = |a: &ClusterAssignment| -> Vec<ClusterDump> {
            (0..a.cluster_count())
                .map(|c| ClusterDump {
                    id: c,
                    exemplar: a.exemplar_of[c],
                    members: a.members(c),
                })
                .collect()
        };
        let dump = ClustersDump {
            subgraph_level: level(&artifacts.subgraph_clusters),
            representative_level: level(&artifacts.representative_clusters),
        };
        fs::write(
            sibling_path(&cfg.output, "clusters.json"),
            serde_json::to_vec_pretty(&dump)?,
        )?;
    }
    if cfg.dump.supergraphs {
        #[derive(Serialize)]
        struct SuperGraphDump {
            cluster: usize,
            nodes: Vec<NodeId>,
            edges: Vec<(NodeId, NodeId)>,
            provenance: Vec<BTreeMap<NodeId, NodeId>>,
        }
        let dumps: Vec<SuperGraphDump> = artifacts
            .supergraphs
            .iter()
            .enumerate()
            .map(|(c, sg)| SuperGraphDump {
                cluster: c,
                nodes: sg.graph().nodes().cloned().collect(),
                edges: sg
                    .graph()
                    .edges()
                    .map(|(a, b)| (a.clone(), b.clone()))
                    .collect(),
                provenance: (0..sg.member_count())
                    .map(|m| sg.provenance(m).clone())
                    .collect(),
            })
            .collect();
        fs::write(
            sibling_path(&cfg.output, "supergraphs.json"),
            serde_json::to_vec_pretty(&dumps)?,
        )?;
    }
    Ok(())
}
