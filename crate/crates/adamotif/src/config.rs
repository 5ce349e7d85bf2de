//! Pipeline configuration: defaults, TOML config files and the merge
//! with command-line overrides.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::clustering::{ApOptions, Preference};
use crate::embedding::EmbeddingParams;
use crate::error::{Error, Result};
use crate::graph::InputFormat;
use crate::layout::LayoutParams;
use crate::motif::MotifConfig;
use crate::supergraph::AlignParams;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PipelineMode {
    Adamotif,
    Primitive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Svg,
    Json,
    Both,
}

/// Clustering knobs exposed in the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClusteringConfig {
    pub damping: f64,
    pub preference: Preference,
}

impl Default for ClusteringConfig {
    fn default() -> Self {
        let d = ApOptions::default();
        ClusteringConfig {
            damping: d.damping,
            preference: d.preference,
        }
    }
}

impl ClusteringConfig {
    pub fn to_options(&self) -> ApOptions {
        ApOptions {
            damping: self.damping,
            preference: self.preference,
            ..ApOptions::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct DumpFlags {
    pub partition: bool,
    pub embeddings: bool,
    pub clusters: bool,
    pub supergraphs: bool,
}

impl Default for DumpFlags {
    fn default() -> Self {
        DumpFlags {
            partition: false,
            embeddings: false,
            clusters: false,
            supergraphs: false,
        }
    }
}

/// Everything a pipeline run needs. A TOML config file deserializes into
/// this structure with defaults for missing keys; CLI flags override
/// individual fields afterwards.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub input: PathBuf,
    pub input_format: Option<InputFormat>,
    pub output: PathBuf,
    pub format: OutputFormat,
    pub mode: PipelineMode,
    pub seed: u64,
    pub resolution: f64,
    pub canvas: (f64, f64),
    pub label_threshold: usize,
    pub embedding: EmbeddingParams,
    pub clustering: ClusteringConfig,
    pub alignment: AlignParams,
    pub layout: LayoutParams,
    pub motif: MotifConfig,
    pub dump: DumpFlags,
    pub report: Option<PathBuf>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            input: PathBuf::new(),
            input_format: None,
            output: PathBuf::new(),
            format: OutputFormat::Svg,
            mode: PipelineMode::Adamotif,
            seed: DEFAULT_SEED,
            resolution: 1.0,
            canvas: (1600.0, 1200.0),
            label_threshold: 5,
            embedding: EmbeddingParams::default(),
            clustering: ClusteringConfig::default(),
            alignment: AlignParams::default(),
            layout: LayoutParams::default(),
            motif: MotifConfig::default(),
            dump: DumpFlags::default(),
            report: None,
        }
    }
}

impl PipelineConfig {
    /// Parses a TOML config file; missing keys keep their defaults.
    pub fn from_toml(text: &str) -> Result<PipelineConfig> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.input.as_os_str().is_empty() {
            return Err(Error::Config("no input file given".into()));
        }
        if self.output.as_os_str().is_empty() {
            return Err(Error::Config("no output file given".into()));
        }
        if self.resolution <= 0.0 {
            return Err(Error::Config("resolution must be positive".into()));
        }
        if !(0.5..1.0).contains(&self.clustering.damping) {
            return Err(Error::Config("clustering.damping must lie in [0.5, 1)".into()));
        }
        if !(0.0..=1.0).contains(&self.alignment.quantile_threshold) {
            return Err(Error::Config(
                "alignment.quantile_threshold must lie in [0, 1]".into(),
            ));
        }
        if self.canvas.0 <= 0.0 || self.canvas.1 <= 0.0 {
            return Err(Error::Config("canvas dimensions must be positive".into()));
        }
        Ok(())
    }

    /// Input format: explicit configuration, or inferred from the input
    /// file extension.
    pub fn effective_input_format(&self) -> InputFormat {
        if let Some(f) = self.input_format {
            return f;
        }
        match self
            .input
            .extension()
            .and_then(|e| e.to_str())
            .unwrap_or("")
            .to_ascii_lowercase()
            .as_str()
        {
            "json" => InputFormat::JsonNodeLink,
            "csv" => InputFormat::Csv,
            _ => InputFormat::Whitespace,
        }
    }

    /// Deterministic snapshot of the numeric parameters for scene
    /// metadata.
    pub fn parameter_snapshot(&self) -> String {
        #[derive(Serialize)]
        struct Snapshot<'a> {
            mode: &'a PipelineMode,
            seed: u64,
            resolution: f64,
            canvas: (f64, f64),
            label_threshold: usize,
            embedding: &'a EmbeddingParams,
            clustering: &'a ClusteringConfig,
            alignment: &'a AlignParams,
            layout: &'a LayoutParams,
            motif: &'a MotifConfig,
        }
        serde_json::to_string(&Snapshot {
            mode: &self.mode,
            seed: self.seed,
            resolution: self.resolution,
            canvas: self.canvas,
            label_threshold: self.label_threshold,
            embedding: &self.embedding,
            clustering: &self.clustering,
            alignment: &self.alignment,
            layout: &self.layout,
            motif: &self.motif,
        })
        .expect("config snapshot serializes")
    }
}

/// Parses a `WIDTHxHEIGHT` canvas specification.
pub fn parse_canvas(spec: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = spec.split(['x', 'X']).collect();
    if parts.len() != 2 {
        return Err(Error::Config(format!(
            "canvas must look like 1600x1200, got `{spec}`"
        )));
    }
    let w: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("bad canvas width `{}`", parts[0])))?;
    let h: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("bad canvas height `{}`", parts[1])))?;
    if w <= 0.0 || h <= 0.0 {
        return Err(Error::Config("canvas dimensions must be positive".into()));
    }
    Ok((w, h))
}

/// Derives the path for a sibling artifact such as `scene.partition.json`.
pub fn sibling_path(output: &Path, suffix: &str) -> PathBuf {
    let stem = output
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("output");
    output.with_file_name(format!("{stem}.{suffix}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_through_toml() {
        let cfg = PipelineConfig::default();
        let text = toml::to_string(&cfg).unwrap();
        let back = PipelineConfig::from_toml(&text).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn partial_toml_keeps_defaults() {
        let cfg = PipelineConfig::from_toml(
            r#"
input = "graph.txt"
output = "scene.svg"
seed = 7

[embedding]
theta_count = 8

[clustering]
preference = "median"

[alignment]
rank = 4
"#,
        )
        .unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.embedding.theta_count, 8);
        assert_eq!(cfg.embedding.theta_max, 5.0);
        assert_eq!(cfg.alignment.rank, 4);
        assert_eq!(cfg.alignment.quantile_threshold, 0.5);
        assert_eq!(cfg.clustering.preference, Preference::Median);
        assert_eq!(cfg.layout.iterations, 300);
    }

    #[test]
    fn numeric_preference_parses() {
        let cfg = PipelineConfig::from_toml(
            "input = \"a\"\noutput = \"b\"\n[clustering]\npreference = -50.5\n",
        )
        .unwrap();
        assert_eq!(cfg.clustering.preference, Preference::Value(-50.5));
    }

    #[test]
    fn canvas_spec_parses() {
        assert_eq!(parse_canvas("1600x1200").unwrap(), (1600.0, 1200.0));
        assert_eq!(parse_canvas("800X600").unwrap(), (800.0, 600.0));
        assert!(parse_canvas("1600").is_err());
        assert!(parse_canvas("0x100").is_err());
    }

    #[test]
    fn format_inference() {
        let mut cfg = PipelineConfig::default();
        cfg.input = PathBuf::from("graph.json");
        assert_eq!(cfg.effective_input_format(), InputFormat::JsonNodeLink);
        cfg.input = PathBuf::from("graph.csv");
        assert_eq!(cfg.effective_input_format(), InputFormat::Csv);
        cfg.input = PathBuf::from("graph.edges");
        assert_eq!(cfg.effective_input_format(), InputFormat::Whitespace);
        cfg.input_format = Some(InputFormat::Csv);
        assert_eq!(cfg.effective_input_format(), InputFormat::Csv);
    }

    #[test]
    fn validation_catches_missing_paths() {
        let cfg = PipelineConfig::default();
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn sibling_paths() {
        let p = sibling_path(Path::new("out/scene.svg"), "partition.json");
        assert_eq!(p, PathBuf::from("out/scene.partition.json"));
    }
}
