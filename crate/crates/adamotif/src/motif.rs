//! Adaptive motif construction: concave contour, buffered outline,
//! cluster color and area-proportional size.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{alpha_shape, buffer_polygon, default_alpha, Polygon};
use crate::graph::{Graph, NodeId};
use crate::layout::{DecoratedLayout, NodeEncoding};

/// 12-entry categorical palette; cluster indices cycle beyond it.
pub const DEFAULT_PALETTE: [&str; 12] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
    "#9c755f", "#bab0ac", "#86bcb6", "#d37295",
];

/// Alpha parameter choice: adaptive (twice the median nearest-neighbor
/// distance) or fixed. Serializes as `"auto"` or a number.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum AlphaChoice {
    #[default]
    Auto,
    Fixed(f64),
}

impl Serialize for AlphaChoice {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            AlphaChoice::Auto => serializer.serialize_str("auto"),
            AlphaChoice::Fixed(v) => serializer.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for AlphaChoice {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Number(f64),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Text(s) if s == "auto" => Ok(AlphaChoice::Auto),
            Raw::Text(s) => Err(serde::de::Error::custom(format!(
                "alpha must be \"auto\" or a number, got \"{s}\""
            ))),
            Raw::Number(v) => Ok(AlphaChoice::Fixed(v)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MotifConfig {
    /// Contour area per node in px^2.
    pub base_area: f64,
    pub alpha: AlphaChoice,
    /// Buffer distance as a multiple of the node radius.
    pub buffer_factor: f64,
    pub node_radius: f64,
    pub palette: Vec<String>,
}

impl Default for MotifConfig {
    fn default() -> Self {
        MotifConfig {
            base_area: 300.0,
            alpha: AlphaChoice::Auto,
            buffer_factor: 2.5,
            node_radius: 5.0,
            palette: DEFAULT_PALETTE.iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// One rendered node inside a motif.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotifNode {
    pub id: NodeId,
    pub x: f64,
    pub y: f64,
    pub encoding: NodeEncoding,
}

/// One internal edge; dashed edges touch an absent node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotifInternalEdge {
    pub a: NodeId,
    pub b: NodeId,
    pub dashed: bool,
}

/// A community rendered as an adaptive glyph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Motif {
    pub community_index: usize,
    pub cluster_index: usize,
    pub color: String,
    pub contour: Polygon,
    pub nodes: Vec<MotifNode>,
    pub edges: Vec<MotifInternalEdge>,
    /// Uniform factor applied to the internal layout.
    pub scale: f64,
    /// Contour centroid.
    pub anchor: (f64, f64),
    /// Number of nodes of the underlying community (drives the area).
    pub node_count: usize,
    pub degenerate_contour: bool,
}

impl Motif {
    pub fn translate(&mut self, dx: f64, dy: f64) {
        self.contour.translate(dx, dy);
        for n in &mut self.nodes {
            n.x += dx;
            n.y += dy;
        }
        self.anchor.0 += dx;
        self.anchor.1 += dy;
    }

    /// Collision radius used by the global layout.
    pub fn bounding_radius(&self) -> f64 {
        self.contour.bounding_radius()
    }
}

/// Builds the motif of one community.
///
/// `source` is the graph whose silhouette is drawn (the representative
/// for decorated layouts, the community itself otherwise); `layout` must
/// cover its nodes. `node_count` is the size of the underlying community:
/// the contour is scaled so its area equals `base_area x node_count`.
pub fn build_motif(
    community_index: usize,
    source: &Graph,
    layout: &DecoratedLayout,
    cluster_index: usize,
    cfg: &MotifConfig,
    node_count: usize,
) -> Result<Motif> {
    if source.is_empty() {
        return Err(Error::domain("cannot build a motif from an empty layout"));
    }
    if node_count == 0 {
        return Err(Error::domain("motif node_count must be positive"));
    }
    let mut points = Vec::with_capacity(source.node_count());
    for v in source.nodes() {
        let (x, y) = layout
            .positions
            .get(v)
            .ok_or_else(|| Error::domain(format!("node `{v}` has no layout position")))?;
        points.push((x, y));
    }

    let alpha = match cfg.alpha {
        AlphaChoice::Auto => default_alpha(&points),
        AlphaChoice::Fixed(a) => a,
    };
    let contour = alpha_shape(&points, alpha);
    let buffered = buffer_polygon(&contour.polygon, cfg.node_radius * cfg.buffer_factor);

    // Joint uniform rescale about the contour centroid so the contour
    // area hits the size encoding exactly.
    let target_area = cfg.base_area * node_count as f64;
    let area = buffered.area().max(1e-12);
    let factor = (target_area / area).sqrt();
    let center = buffered.centroid();

    let mut final_contour = buffered;
    final_contour.scale_about(center, factor);

    let scale_point = |(x, y): (f64, f64)| {
        (
            center.0 + (x - center.0) * factor,
            center.1 + (y - center.1) * factor,
        )
    };

    let nodes: Vec<MotifNode> = source
        .nodes()
        .map(|v| {
            let raw = layout.positions.get(v).expect("checked above");
            let (x, y) = scale_point(raw);
            MotifNode {
                id: v.clone(),
                x,
                y,
                encoding: layout
                    .encodings
                    .get(v)
                    .copied()
                    .unwrap_or(NodeEncoding::Plain),
            }
        })
        .collect();

    let edges: Vec<MotifInternalEdge> = source
        .edges()
        .map(|(a, b)| {
            let key = if a < b {
                (a.clone(), b.clone())
            } else {
                (b.clone(), a.clone())
            };
            let dashed = layout.dashed_edges.contains(&key);
            MotifInternalEdge {
                a: key.0,
                b: key.1,
                dashed,
            }
        })
        .collect();

    let anchor = final_contour.centroid();
    Ok(Motif {
        community_index,
        cluster_index,
        color: cfg.palette[cluster_index % cfg.palette.len()].clone(),
        contour: final_contour,
        nodes,
        edges,
        scale: factor,
        anchor,
        node_count,
        degenerate_contour: contour.degenerate,
    })
}
