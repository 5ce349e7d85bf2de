//! Scene assembly: inter-community edge aggregation, global motif
//! placement and the final renderable scene.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::community::CommunityPartition;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::motif::Motif;

/// Aggregated edge between two motifs. `count` is the exact number of
/// original inter-community edges; `gray` maps count to darkness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotifEdge {
    pub a: usize,
    pub b: usize,
    pub count: usize,
    pub gray: f64,
    pub bundle_path: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneMetadata {
    pub dataset: String,
    pub seed: u64,
    pub mode: String,
    /// Snapshot of the effective parameters, serialized deterministically.
    pub parameters: String,
}

/// Final renderable scene.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotifScene {
    pub schema_version: u32,
    pub canvas: (f64, f64),
    pub metadata: SceneMetadata,
    pub motifs: Vec<Motif>,
    pub edges: Vec<MotifEdge>,
}

pub const SCENE_SCHEMA_VERSION: u32 = 1;

impl MotifScene {
    /// Largest pairwise contour overlap as a fraction of the smaller
    /// contour's area (grid-sampled).
    pub fn max_pairwise_overlap(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.motifs.len() {
            for j in (i + 1)..self.motifs.len() {
                worst = worst.max(contour_overlap_fraction(&self.motifs[i], &self.motifs[j]));
            }
        }
        worst
    }
}

/// Fraction of the smaller contour's area covered by the intersection
/// with the other contour, estimated on a deterministic 64x64 grid.
pub fn contour_overlap_fraction(a: &Motif, b: &Motif) -> f64 {
    let (ac, bc) = (&a.contour, &b.contour);
    let (amin, amax) = bbox(ac.vertices());
    let (bmin, bmax) = bbox(bc.vertices());
    let lo = (amin.0.max(bmin.0), amin.1.max(bmin.1));
    let hi = (amax.0.min(bmax.0), amax.1.min(bmax.1));
    if lo.0 >= hi.0 || lo.1 >= hi.1 {
        return 0.0;
    }
    const N: usize = 64;
    let mut hits = 0usize;
    for iy in 0..N {
        for ix in 0..N {
            let p = (
                lo.0 + (hi.0 - lo.0) * (ix as f64 + 0.5) / N as f64,
                lo.1 + (hi.1 - lo.1) * (iy as f64 + 0.5) / N as f64,
            );
            if ac.contains(p) && bc.contains(p) {
                hits += 1;
            }
        }
    }
    let cell = (hi.0 - lo.0) * (hi.1 - lo.1) / (N * N) as f64;
    let overlap = hits as f64 * cell;
    overlap / ac.area().min(bc.area()).max(1e-12)
}

fn bbox(vertices: &[(f64, f64)]) -> ((f64, f64), (f64, f64)) {
    let mut min = (f64::INFINITY, f64::INFINITY);
    let mut max = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &(x, y) in vertices {
        min.0 = min.0.min(x);
        min.1 = min.1.min(y);
        max.0 = max.0.max(x);
        max.1 = max.1.max(y);
    }
    (min, max)
}

/// Replaces all edges between two communities by one aggregated edge.
///
/// Gray is a normalized log scale, `ln(1+count)/ln(1+max_count)`; when
/// every count is equal the whole scene renders at 0.5.
pub fn aggregate_edges(g: &Graph, p: &CommunityPartition) -> Vec<MotifEdge> {
    let assignment = p.assignment_idx();
    let mut counts: std::collections::BTreeMap<(usize, usize), usize> =
        std::collections::BTreeMap::new();
    for &(u, v) in g.edges_idx() {
        let (ca, cb) = (assignment[u], assignment[v]);
        if ca != cb {
            let key = (ca.min(cb), ca.max(cb));
            *counts.entry(key).or_insert(0) += 1;
        }
    }
    let max_count = counts.values().copied().max().unwrap_or(0);
    let min_count = counts.values().copied().min().unwrap_or(0);
    counts
        .into_iter()
        .map(|((a, b), count)| {
            let gray = if max_count == min_count {
                0.5
            } else {
                ((1 + count) as f64).ln() / ((1 + max_count) as f64).ln()
            };
            MotifEdge {
                a,
                b,
                count,
                gray,
                bundle_path: Vec::new(),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalLayoutParams {
    pub canvas: (f64, f64),
    /// Padding added to each motif's bounding-circle collision radius.
    pub padding: f64,
    pub iterations: usize,
    pub seed: u64,
    pub max_retries: usize,
}

impl Default for GlobalLayoutParams {
    fn default() -> Self {
        GlobalLayoutParams {
            canvas: (1600.0, 1200.0),
            padding: 8.0,
            iterations: 300,
            seed: 42,
            max_retries: 5,
        }
    }
}

/// Places motif anchors with a force layout over collision circles.
///
/// Returns the anchors and the (possibly grown) canvas: a packing that
/// cannot satisfy the 1% overlap bound grows the canvas by 25% and
/// retries, up to `max_retries` times.
pub fn global_motif_layout(
    motifs: &[Motif],
    edges: &[MotifEdge],
    params: &GlobalLayoutParams,
) -> Result<(Vec<(f64, f64)>, (f64, f64))> {
    if motifs.is_empty() {
        return Err(Error::domain("cannot lay out zero motifs"));
    }
    let radii: Vec<f64> = motifs
        .iter()
        .map(|m| m.bounding_radius() + params.padding)
        .collect();

    let mut canvas = params.canvas;
    for attempt in 0..=params.max_retries {
        match try_pack(motifs, edges, &radii, canvas, params) {
            Some(anchors) => {
                // Exact centering: bounding box of the collision circles
                // moves onto the canvas center.
                let mut min = (f64::INFINITY, f64::INFINITY);
                let mut max = (f64::NEG_INFINITY, f64::NEG_INFINITY);
                for (i, &(x, y)) in anchors.iter().enumerate() {
                    min.0 = min.0.min(x - radii[i]);
                    min.1 = min.1.min(y - radii[i]);
                    max.0 = max.0.max(x + radii[i]);
                    max.1 = max.1.max(y + radii[i]);
                }
                let dx = canvas.0 / 2.0 - (min.0 + max.0) / 2.0;
                let dy = canvas.1 / 2.0 - (min.1 + max.1) / 2.0;
                let centered: Vec<(f64, f64)> =
                    anchors.iter().map(|&(x, y)| (x + dx, y + dy)).collect();
                return Ok((centered, canvas));
            }
            None => {
                if attempt == params.max_retries {
                    break;
                }
                canvas = (canvas.0 * 1.25, canvas.1 * 1.25);
            }
        }
    }
    Err(Error::Packing {
        retries: params.max_retries,
    })
}

fn try_pack(
    motifs: &[Motif],
    edges: &[MotifEdge],
    radii: &[f64],
    canvas: (f64, f64),
    params: &GlobalLayoutParams,
) -> Option<Vec<(f64, f64)>> {
    let n = motifs.len();
    let max_r = radii.iter().copied().fold(0.0, f64::max);
    if 2.0 * max_r >= canvas.0.min(canvas.1) {
        return None; // largest motif cannot fit
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut pos: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            (
                radii[i] + rng.gen::<f64>() * (canvas.0 - 2.0 * radii[i]),
                radii[i] + rng.gen::<f64>() * (canvas.1 - 2.0 * radii[i]),
            )
        })
        .collect();
    if n == 1 {
        return Some(pos);
    }

    let center = (canvas.0 / 2.0, canvas.1 / 2.0);
    let link_gap = 30.0;
    let temp0 = 0.1 * (canvas.0 * canvas.0 + canvas.1 * canvas.1).sqrt();
    let iterations = params.iterations.max(1);

    for it in 0..iterations {
        let mut disp = vec![(0.0f64, 0.0f64); n];

        for i in 0..n {
            for j in (i + 1)..n {
                let dx = pos[i].0 - pos[j].0;
                let dy = pos[i].1 - pos[j].1;
                let d2 = (dx * dx + dy * dy).max(1.0);
                let k = radii[i] + radii[j];
                // Magnitude k^2/d, i.e. coefficient k^2/d^2 on (dx, dy).
                let f = k * k / d2;
                disp[i].0 += f * dx;
                disp[i].1 += f * dy;
                disp[j].0 -= f * dx;
                disp[j].1 -= f * dy;
            }
        }

        // Link force with strength proportional to gray.
        for e in edges {
            let (i, j) = (e.a, e.b);
            let dx = pos[i].0 - pos[j].0;
            let dy = pos[i].1 - pos[j].1;
            let d = (dx * dx + dy * dy).sqrt().max(1e-9);
            let ideal = radii[i] + radii[j] + link_gap;
            let f = 0.02 * e.gray * (d - ideal);
            disp[i].0 -= f * dx / d;
            disp[i].1 -= f * dy / d;
            disp[j].0 += f * dx / d;
            disp[j].1 += f * dy / d;
        }

        for (i, d) in disp.iter_mut().enumerate() {
            d.0 += 0.01 * (center.0 - pos[i].0);
            d.1 += 0.01 * (center.1 - pos[i].1);
        }

        let temp = (temp0 * (1.0 - it as f64 / iterations as f64)).max(1.0);
        for i in 0..n {
            let (dx, dy) = disp[i];
            let len = (dx * dx + dy * dy).sqrt();
            if len > 1e-12 {
                let step = len.min(temp);
                pos[i].0 += dx / len * step;
                pos[i].1 += dy / len * step;
            }
            pos[i].0 = pos[i].0.clamp(radii[i], canvas.0 - radii[i]);
            pos[i].1 = pos[i].1.clamp(radii[i], canvas.1 - radii[i]);
        }

        resolve_collisions(&mut pos, radii, canvas, 4);
    }

    // Final hard collision relaxation.
    for _ in 0..400 {
        if !resolve_collisions(&mut pos, radii, canvas, 1) {
            return Some(pos);
        }
    }
    None
}

/// Pushes overlapping collision circles apart; returns whether any
/// overlap was found.
fn resolve_collisions(
    pos: &mut [(f64, f64)],
    radii: &[f64],
    canvas: (f64, f64),
    passes: usize,
) -> bool {
    let n = pos.len();
    let mut found = false;
    for _ in 0..passes {
        for i in 0..n {
            for j in (i + 1)..n {
                let dx = pos[j].0 - pos[i].0;
                let dy = pos[j].1 - pos[i].1;
                let d = (dx * dx + dy * dy).sqrt();
                let min_d = radii[i] + radii[j];
                if d >= min_d {
                    continue;
                }
                found = true;
                let (ux, uy) = if d > 1e-9 {
                    (dx / d, dy / d)
                } else {
                    // Coincident anchors separate along a deterministic axis.
                    let angle = (i * 7 + j * 13) as f64;
                    (angle.cos(), angle.sin())
                };
                let push = (min_d - d) / 2.0 + 0.5;
                pos[i].0 -= ux * push;
                pos[i].1 -= uy * push;
                pos[j].0 += ux * push;
                pos[j].1 += uy * push;
                pos[i].0 = pos[i].0.clamp(radii[i], canvas.0 - radii[i]);
                pos[i].1 = pos[i].1.clamp(radii[i], canvas.1 - radii[i]);
                pos[j].0 = pos[j].0.clamp(radii[j], canvas.0 - radii[j]);
                pos[j].1 = pos[j].1.clamp(radii[j], canvas.1 - radii[j]);
            }
        }
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::community::detect_communities;
    use crate::graph::Graph;
    use crate::layout::{force_layout, DecoratedLayout, LayoutParams};
    use crate::motif::{build_motif, MotifConfig};

    fn sample_motif(idx: usize, count: usize) -> Motif {
        let g = Graph::from_edges([("a", "b"), ("b", "c"), ("c", "a"), ("c", "d")]);
        let layout = DecoratedLayout::plain(force_layout(&g, &LayoutParams::default()));
        build_motif(idx, &g, &layout, 0, &MotifConfig::default(), count).unwrap()
    }

    #[test]
    fn aggregation_conserves_counts() {
        let g = Graph::from_edges([
            ("a", "b"),
            ("b", "c"),
            ("c", "a"),
            ("x", "y"),
            ("y", "z"),
            ("z", "x"),
            ("a", "x"),
            ("b", "y"),
            ("b", "z"),
        ]);
        let p = detect_communities(&g, 1.0, 42).unwrap();
        let edges = aggregate_edges(&g, &p);
        let total: usize = edges.iter().map(|e| e.count).sum();
        assert_eq!(total, 3, "three crossing edges must be conserved");
        assert_eq!(edges.len(), 1);
        assert_eq!(edges[0].gray, 0.5, "all-equal counts collapse to gray 0.5");
    }

    #[test]
    fn no_crossing_edges_is_empty() {
        let g = Graph::from_edges([("a", "b"), ("b", "c"), ("c", "a")]);
        let p = detect_communities(&g, 1.0, 42).unwrap();
        assert!(aggregate_edges(&g, &p).is_empty());
    }

    #[test]
    fn five_crossing_edges_draw_darker_than_one() {
        // Three cliques; one pair bridged by 5 edges, another by 1.
        let mut edges = Vec::new();
        let groups = ["a", "b", "c"];
        for g in groups {
            for i in 0..5 {
                for j in (i + 1)..5 {
                    edges.push((format!("{g}{i}"), format!("{g}{j}")));
                }
            }
        }
        for i in 0..5 {
            edges.push((format!("a{i}"), format!("b{i}")));
        }
        edges.push(("b0".to_owned(), "c0".to_owned()));
        let g = Graph::from_edges(edges.iter().map(|(u, v)| (u.as_str(), v.as_str())));
        let p = detect_communities(&g, 1.0, 42).unwrap();
        assert_eq!(p.community_count(), 3);
        let agg = aggregate_edges(&g, &p);
        assert_eq!(agg.len(), 2);
        let five = agg.iter().find(|e| e.count == 5).expect("count-5 edge");
        let one = agg.iter().find(|e| e.count == 1).expect("count-1 edge");
        assert!(five.gray > one.gray, "more original edges draw darker");
    }

    #[test]
    fn gray_is_monotone_in_count() {
        // K4 and two triangles joined by differing numbers of edges.
        let g = Graph::from_edges([
            ("a1", "a2"),
            ("a2", "a3"),
            ("a3", "a1"),
            ("b1", "b2"),
            ("b2", "b3"),
            ("b3", "b1"),
            ("c1", "c2"),
            ("c2", "c3"),
            ("c3", "c1"),
            // a-b: 1 edge, b-c: 2 edges, a-c: 3 edges
            ("a1", "b1"),
            ("b1", "c1"),
            ("b2", "c2"),
            ("a1", "c1"),
            ("a2", "c2"),
            ("a3", "c3"),
        ]);
        let p = detect_communities(&g, 1.0, 42).unwrap();
        let edges = aggregate_edges(&g, &p);
        assert!(edges.len() >= 2);
        let mut sorted = edges.clone();
        sorted.sort_by_key(|e| e.count);
        for w in sorted.windows(2) {
            assert!(w[0].gray <= w[1].gray + 1e-12);
        }
        let max = sorted.last().unwrap();
        assert!((max.gray - 1.0).abs() < 1e-12, "largest count is darkest");
    }

    #[test]
    fn single_motif_is_centered() {
        let motifs = vec![sample_motif(0, 4)];
        let params = GlobalLayoutParams::default();
        let (anchors, canvas) = global_motif_layout(&motifs, &[], &params).unwrap();
        assert_eq!(canvas, params.canvas);
        assert!((anchors[0].0 - canvas.0 / 2.0).abs() < 1e-9);
        assert!((anchors[0].1 - canvas.1 / 2.0).abs() < 1e-9);
    }

    #[test]
    fn unconnected_motifs_respect_collision_radii() {
        let motifs = vec![sample_motif(0, 10), sample_motif(1, 14)];
        let params = GlobalLayoutParams::default();
        let (anchors, _) = global_motif_layout(&motifs, &[], &params).unwrap();
        let d = ((anchors[0].0 - anchors[1].0).powi(2) + (anchors[0].1 - anchors[1].1).powi(2)).sqrt();
        let min_d = motifs[0].bounding_radius() + motifs[1].bounding_radius() + 2.0 * params.padding;
        assert!(d >= min_d - 1e-9, "separation {d} below {min_d}");
    }

    #[test]
    fn layout_is_deterministic() {
        let motifs = vec![sample_motif(0, 5), sample_motif(1, 9), sample_motif(2, 3)];
        let edges = vec![MotifEdge {
            a: 0,
            b: 1,
            count: 2,
            gray: 0.7,
            bundle_path: Vec::new(),
        }];
        let params = GlobalLayoutParams::default();
        let (a1, _) = global_motif_layout(&motifs, &edges, &params).unwrap();
        let (a2, _) = global_motif_layout(&motifs, &edges, &params).unwrap();
        assert_eq!(a1, a2);
    }

    #[test]
    fn impossible_packing_errors_after_retries() {
        let motifs = vec![sample_motif(0, 4), sample_motif(1, 4)];
        let params = GlobalLayoutParams {
            canvas: (10.0, 10.0),
            max_retries: 1,
            iterations: 10,
            ..GlobalLayoutParams::default()
        };
        // With only one retry the canvas reaches 12.5x9.4, still far too
        // small for two ~34px-radius motifs.
        assert!(global_motif_layout(&motifs, &[], &params).is_err());
    }
}
