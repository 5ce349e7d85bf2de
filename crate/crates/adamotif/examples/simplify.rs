//! Full pipeline: Les Miserables in, SVG + JSON scene out.
//!
//! Run with: cargo run --example simplify

use std::sync::Arc;

use adamotif::{
    load_edge_list, render, simplify_graph, InputFormat, PipelineConfig, RenderFormat,
    RenderOptions,
};

fn main() -> adamotif::Result<()> {
    let data = std::fs::read(concat!(env!("CARGO_MANIFEST_DIR"), "/data/lesmis.txt"))?;
    let (graph, _) = load_edge_list(data.as_slice(), InputFormat::Whitespace)?;
    let graph = Arc::new(graph);

    let cfg = PipelineConfig::default();
    let (scene, report, _) = simplify_graph(&graph, "lesmis", &cfg)?;

    println!(
        "{} -> {} motifs, {} aggregated edges on a {}x{} canvas",
        report.dataset,
        scene.motifs.len(),
        scene.edges.len(),
        scene.canvas.0,
        scene.canvas.1
    );
    for stage in &report.stages {
        println!("  {:<16} {:>8.3}s", stage.stage, stage.seconds);
    }

    let out_dir = std::env::temp_dir();
    let svg_path = out_dir.join("lesmis-simplified.svg");
    let json_path = out_dir.join("lesmis-simplified.json");
    std::fs::write(&svg_path, render(&scene, RenderFormat::Svg, &RenderOptions::default())?)?;
    std::fs::write(&json_path, render(&scene, RenderFormat::Json, &RenderOptions::default())?)?;
    println!("wrote {} and {}", svg_path.display(), json_path.display());
    Ok(())
}
