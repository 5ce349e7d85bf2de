//! Scene serialization: SVG 1.1 and a schema-versioned JSON form.
//! Both outputs are byte-deterministic for a fixed scene.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::assembly::{MotifScene, SCENE_SCHEMA_VERSION};
use crate::error::{Error, Result};
use crate::layout::{NodeEncoding, RingLevel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RenderFormat {
    Svg,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderOptions {
    /// Edges with at least this many original edges get a count label.
    pub label_threshold: usize,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { label_threshold: 5 }
    }
}

const NODE_RADIUS: f64 = 5.0;
const RING_FACTORS: [f64; 3] = [1.4, 1.8, 2.3];
const CONTOUR_OPACITY: f64 = 0.35;
const CONTOUR_STROKE_WIDTH: f64 = 1.5;

/// Serializes the scene in the requested format.
pub fn render(scene: &MotifScene, format: RenderFormat, opts: &RenderOptions) -> Result<Vec<u8>> {
    match format {
        RenderFormat::Json => Ok(serde_json::to_vec_pretty(scene)?),
        RenderFormat::Svg => Ok(render_svg(scene, opts).into_bytes()),
    }
}

/// Parses a scene back from its JSON form.
pub fn scene_from_json(bytes: &[u8]) -> Result<MotifScene> {
    let scene: MotifScene = serde_json::from_slice(bytes)?;
    if scene.schema_version != SCENE_SCHEMA_VERSION {
        return Err(Error::domain(format!(
            "unsupported scene schema version {} (expected {})",
            scene.schema_version, SCENE_SCHEMA_VERSION
        )));
    }
    Ok(scene)
}

fn fmt_f(v: f64) -> String {
    // Fixed decimals keep the output byte-stable; -0.00 normalizes to 0.00.
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".to_owned()
    } else {
        s
    }
}

/// Maps a gray value in [0, 1] to a luminance hex color (85% down to 25%).
fn gray_color(gray: f64) -> String {
    let lum = 0.85 - 0.60 * gray.clamp(0.0, 1.0);
    let byte = (lum * 255.0).round() as u8;
    format!("#{byte:02x}{byte:02x}{byte:02x}")
}

fn render_svg(scene: &MotifScene, opts: &RenderOptions) -> String {
    let mut svg = String::new();
    let (w, h) = scene.canvas;
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        fmt_f(w),
        fmt_f(h),
        fmt_f(w),
        fmt_f(h)
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);

    // Bundled edges under the motifs.
    for edge in &scene.edges {
        let path = polyline_d(&edge.bundle_path);
        let _ = writeln!(
            svg,
            r#"<path class="motif-edge" d="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
            path,
            gray_color(edge.gray)
        );
        if edge.count >= opts.label_threshold && !edge.bundle_path.is_empty() {
            let mid = edge.bundle_path[edge.bundle_path.len() / 2];
            let _ = writeln!(
                svg,
                r##"<text x="{}" y="{}" font-size="11" font-family="sans-serif" fill="#333333" text-anchor="middle">{}</text>"##,
                fmt_f(mid.0),
                fmt_f(mid.1 - 3.0),
                edge.count
            );
        }
    }

    for motif in &scene.motifs {
        let d = polygon_d(motif.contour.vertices());
        let _ = writeln!(
            svg,
            r#"<path class="motif-contour" d="{}" fill="{}" fill-opacity="{}" stroke="{}" stroke-width="{}"/>"#,
            d,
            motif.color,
            CONTOUR_OPACITY,
            motif.color,
            CONTOUR_STROKE_WIDTH
        );

        for edge in &motif.edges {
            let a = motif.nodes.iter().find(|n| n.id == edge.a);
            let b = motif.nodes.iter().find(|n| n.id == edge.b);
            if let (Some(a), Some(b)) = (a, b) {
                let dash = if edge.dashed {
                    r#" stroke-dasharray="3 2""#
                } else {
                    ""
                };
                let _ = writeln!(
                    svg,
                    r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#9a9a9a" stroke-width="1"{}/>"##,
                    fmt_f(a.x),
                    fmt_f(a.y),
                    fmt_f(b.x),
                    fmt_f(b.y),
                    dash
                );
            }
        }

        for node in &motif.nodes {
            match node.encoding {
                NodeEncoding::Plain => {
                    let _ = writeln!(
                        svg,
                        r##"<circle cx="{}" cy="{}" r="{}" fill="#7a7a7a"/>"##,
                        fmt_f(node.x),
                        fmt_f(node.y),
                        fmt_f(NODE_RADIUS)
                    );
                }
                NodeEncoding::Absent => {
                    let _ = writeln!(
                        svg,
                        r##"<circle class="absent-node" cx="{}" cy="{}" r="{}" fill="white" stroke="#7a7a7a" stroke-width="1" stroke-dasharray="2 2"/>"##,
                        fmt_f(node.x),
                        fmt_f(node.y),
                        fmt_f(NODE_RADIUS)
                    );
                }
                NodeEncoding::Ringed { level, .. } => {
                    let factor = match level {
                        RingLevel::Small => RING_FACTORS[0],
                        RingLevel::Medium => RING_FACTORS[1],
                        RingLevel::Large => RING_FACTORS[2],
                    };
                    let _ = writeln!(
                        svg,
                        r##"<circle class="node-ring" cx="{}" cy="{}" r="{}" fill="none" stroke="#7a7a7a" stroke-width="1.5"/>"##,
                        fmt_f(node.x),
                        fmt_f(node.y),
                        fmt_f(NODE_RADIUS * factor)
                    );
                    let _ = writeln!(
                        svg,
                        r##"<circle cx="{}" cy="{}" r="{}" fill="#7a7a7a"/>"##,
                        fmt_f(node.x),
                        fmt_f(node.y),
                        fmt_f(NODE_RADIUS)
                    );
                }
            }
        }
    }

    svg.push_str("</svg>\n");
    svg
}

fn polygon_d(vertices: &[(f64, f64)]) -> String {
    let mut d = String::new();
    for (i, &(x, y)) in vertices.iter().enumerate() {
        let cmd = if i == 0 { 'M' } else { 'L' };
        let _ = write!(d, "{}{} {} ", cmd, fmt_f(x), fmt_f(y));
    }
    d.push('Z');
    d
}

fn polyline_d(points: &[(f64, f64)]) -> String {
    let mut d = String::new();
    for (i, &(x, y)) in points.iter().enumerate() {
        let cmd = if i == 0 { 'M' } else { 'L' };
        let _ = write!(d, "{}{} {} ", cmd, fmt_f(x), fmt_f(y));
    }
    d.trim_end().to_owned()
}
