//! Command-line front end for the simplification pipeline.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use adamotif::{
    parse_canvas, run_pipeline, InputFormat, OutputFormat, PipelineConfig, PipelineMode,
};

#[derive(Parser, Debug)]
#[command(
    name = "adamotif",
    about = "Simplify an undirected graph into a scene of adaptive community motifs",
    version
)]
struct Cli {
    /// Input edge list (whitespace, CSV, or JSON node-link).
    #[arg(long)]
    input: Option<PathBuf>,

    /// Input format; inferred from the file extension when omitted.
    #[arg(long, value_enum)]
    input_format: Option<CliInputFormat>,

    /// Output file for the rendered scene.
    #[arg(long)]
    output: Option<PathBuf>,

    /// Output format.
    #[arg(long, value_enum)]
    format: Option<CliOutputFormat>,

    /// Pipeline mode: the full method or the primitive baseline that
    /// skips the alignment-driven subgraph layouts.
    #[arg(long, value_enum)]
    mode: Option<CliMode>,

    /// Master seed; every run is reproducible by default.
    #[arg(long)]
    seed: Option<u64>,

    /// TOML config file mirroring every flag.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Community detection resolution.
    #[arg(long)]
    resolution: Option<f64>,

    /// Canvas size as WIDTHxHEIGHT, e.g. 1600x1200.
    #[arg(long)]
    canvas: Option<String>,

    /// Aggregated edges with at least this count get a text label.
    #[arg(long)]
    label_threshold: Option<usize>,

    /// Write the node-to-community assignment next to the output.
    #[arg(long)]
    dump_partition: bool,

    /// Write the subgraph embedding vectors next to the output.
    #[arg(long)]
    dump_embeddings: bool,

    /// Write both clustering levels next to the output.
    #[arg(long)]
    dump_clusters: bool,

    /// Write every super-graph with provenance next to the output.
    #[arg(long)]
    dump_supergraphs: bool,

    /// Write a JSON run report (stage timings, counts, warnings).
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum CliInputFormat {
    Whitespace,
    Csv,
    JsonNodeLink,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum CliOutputFormat {
    Svg,
    Json,
    Both,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum CliMode {
    Adamotif,
    Primitive,
}

fn build_config(cli: &Cli) -> Result<PipelineConfig, adamotif::Error> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            PipelineConfig::from_toml(&text)?
        }
        None => PipelineConfig::default(),
    };
    if let Some(input) = &cli.input {
        cfg.input = input.clone();
    }
    if let Some(f) = cli.input_format {
        cfg.input_format = Some(match f {
            CliInputFormat::Whitespace => InputFormat::Whitespace,
            CliInputFormat::Csv => InputFormat::Csv,
            CliInputFormat::JsonNodeLink => InputFormat::JsonNodeLink,
        });
    }
    if let Some(output) = &cli.output {
        cfg.output = output.clone();
    }
    if let Some(f) = cli.format {
        cfg.format = match f {
            CliOutputFormat::Svg => OutputFormat::Svg,
            CliOutputFormat::Json => OutputFormat::Json,
            CliOutputFormat::Both => OutputFormat::Both,
        };
    }
    if let Some(m) = cli.mode {
        cfg.mode = match m {
            CliMode::Adamotif => PipelineMode::Adamotif,
            CliMode::Primitive => PipelineMode::Primitive,
        };
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(r) = cli.resolution {
        cfg.resolution = r;
    }
    if let Some(spec) = &cli.canvas {
        cfg.canvas = parse_canvas(spec)?;
    }
    if let Some(t) = cli.label_threshold {
        cfg.label_threshold = t;
    }
    cfg.dump.partition |= cli.dump_partition;
    cfg.dump.embeddings |= cli.dump_embeddings;
    cfg.dump.clusters |= cli.dump_clusters;
    cfg.dump.supergraphs |= cli.dump_supergraphs;
    if let Some(report) = &cli.report {
        cfg.report = Some(report.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    };

    let cfg = match build_config(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };

    match run_pipeline(&cfg) {
        Ok((scene, report)) => {
            eprintln!(
                "{}: {} nodes, {} edges -> {} motifs in {} clusters ({} representative classes), {} aggregated edges",
                report.dataset,
                report.node_count,
                report.edge_count,
                report.community_count,
                report.first_level_clusters,
                report.second_level_clusters,
                scene.edges.len()
            );
            for stage in &report.stages {
                eprintln!("  {:<16} {:>8.3}s", stage.stage, stage.seconds);
            }
            for warning in &report.warnings {
                eprintln!("  warning: {warning}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
