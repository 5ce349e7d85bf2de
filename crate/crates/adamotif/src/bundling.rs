//! Force-directed edge bundling of the aggregated motif edges.
//!
//! Each edge is subdivided iteratively over bundling cycles; subdivision
//! points feel a spring force toward their polyline neighbors and an
//! electrostatic attraction toward corresponding points of compatible
//! edges (angle, scale, position and visibility compatibility, following
//! the usual force-directed bundling measures). Endpoints stay pinned at
//! the intersection of the anchor-to-anchor segment with each motif
//! contour, so bundles emanate from motif boundaries.

use serde::{Deserialize, Serialize};

use crate::assembly::MotifEdge;
use crate::motif::Motif;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundlingParams {
    pub cycles: usize,
    pub initial_iterations: usize,
    pub initial_step: f64,
    pub spring_constant: f64,
    pub compatibility_threshold: f64,
}

impl Default for BundlingParams {
    fn default() -> Self {
        BundlingParams {
            cycles: 6,
            initial_iterations: 50,
            initial_step: 2.0,
            spring_constant: 0.1,
            compatibility_threshold: 0.6,
        }
    }
}

/// Fills `bundle_path` on every edge. Endpoints derive from the placed
/// motifs' contours and anchors.
pub fn bundle_edges(edges: &mut [MotifEdge], motifs: &[Motif], params: &BundlingParams) {
    let endpoints: Vec<((f64, f64), (f64, f64))> = edges
        .iter()
        .map(|e| boundary_endpoints(&motifs[e.a], &motifs[e.b]))
        .collect();

    let m = edges.len();
    if m == 0 {
        return;
    }

    // Compatibility between edge pairs, measured once on the straight
    // segments. The flag records anti-parallel pairs, whose point
    // correspondence runs backwards.
    let mut compatible: Vec<Vec<(usize, bool)>> = vec![Vec::new(); m];
    for i in 0..m {
        for j in (i + 1)..m {
            if compatibility(endpoints[i], endpoints[j]) >= params.compatibility_threshold {
                let pv = (
                    endpoints[i].1 .0 - endpoints[i].0 .0,
                    endpoints[i].1 .1 - endpoints[i].0 .1,
                );
                let qv = (
                    endpoints[j].1 .0 - endpoints[j].0 .0,
                    endpoints[j].1 .1 - endpoints[j].0 .1,
                );
                let flipped = pv.0 * qv.0 + pv.1 * qv.1 < 0.0;
                compatible[i].push((j, flipped));
                compatible[j].push((i, flipped));
            }
        }
    }

    // Polylines start as [start, mid, end] and double interior points
    // each cycle.
    let mut paths: Vec<Vec<(f64, f64)>> = endpoints
        .iter()
        .map(|&(s, e)| vec![s, midpoint(s, e), e])
        .collect();

    let mut step = params.initial_step;
    let mut iterations = params.initial_iterations;
    for cycle in 0..params.cycles {
        if cycle > 0 {
            let target = 2usize.pow(cycle as u32);
            for path in paths.iter_mut() {
                *path = resample(path, target);
            }
            step /= 2.0;
            iterations = (iterations * 2 + 2) / 3;
        }

        for _ in 0..iterations {
            let mut forces: Vec<Vec<(f64, f64)>> =
                paths.iter().map(|p| vec![(0.0, 0.0); p.len()]).collect();
            for (i, path) in paths.iter().enumerate() {
                let len = segment_length(endpoints[i].0, endpoints[i].1);
                let kp = params.spring_constant / (len.max(1e-9) * path.len() as f64);
                for p in 1..path.len() - 1 {
                    let mut fx = kp * (path[p - 1].0 - path[p].0) + kp * (path[p + 1].0 - path[p].0);
                    let mut fy = kp * (path[p - 1].1 - path[p].1) + kp * (path[p + 1].1 - path[p].1);
                    for &(j, flipped) in &compatible[i] {
                        let q = corresponding_point(&paths[j], p, path.len(), flipped);
                        let dx = q.0 - path[p].0;
                        let dy = q.1 - path[p].1;
                        let d = (dx * dx + dy * dy).sqrt();
                        if d > 1e-6 {
                            fx += dx / d;
                            fy += dy / d;
                        }
                    }
                    forces[i][p] = (fx, fy);
                }
            }
            for (path, force) in paths.iter_mut().zip(&forces) {
                for p in 1..path.len() - 1 {
                    path[p].0 += step * force[p].0;
                    path[p].1 += step * force[p].1;
                }
            }
        }
    }

    for (edge, path) in edges.iter_mut().zip(paths) {
        edge.bundle_path = path;
    }
}

/// Point of `other` corresponding to subdivision index `p` of a path of
/// `len` points; anti-parallel pairs correspond back to front.
fn corresponding_point(other: &[(f64, f64)], p: usize, len: usize, flipped: bool) -> (f64, f64) {
    let t = p as f64 / (len - 1) as f64;
    let idx = (t * (other.len() - 1) as f64).round() as usize;
    if flipped {
        other[other.len() - 1 - idx]
    } else {
        other[idx]
    }
}

fn midpoint(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0)
}

fn segment_length(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

/// Resamples a polyline to `interior` evenly spaced interior points.
fn resample(path: &[(f64, f64)], interior: usize) -> Vec<(f64, f64)> {
    let total: f64 = path.windows(2).map(|w| segment_length(w[0], w[1])).sum();
    let n_out = interior + 2;
    let mut out = Vec::with_capacity(n_out);
    out.push(path[0]);
    if total < 1e-12 {
        for _ in 0..interior {
            out.push(path[0]);
        }
    } else {
        let mut seg = 0usize;
        let mut seg_start = 0.0;
        for k in 1..=interior {
            let target = total * k as f64 / (n_out - 1) as f64;
            loop {
                let seg_len = segment_length(path[seg], path[seg + 1]);
                if seg_start + seg_len >= target || seg + 2 >= path.len() {
                    let t = if seg_len > 1e-12 {
                        ((target - seg_start) / seg_len).clamp(0.0, 1.0)
                    } else {
                        0.0
                    };
                    out.push((
                        path[seg].0 + t * (path[seg + 1].0 - path[seg].0),
                        path[seg].1 + t * (path[seg + 1].1 - path[seg].1),
                    ));
                    break;
                }
                seg_start += seg_len;
                seg += 1;
            }
        }
    }
    out.push(path[path.len() - 1]);
    out
}

/// Product of the four bundling compatibility measures for straight
/// segments `p` and `q`.
fn compatibility(p: ((f64, f64), (f64, f64)), q: ((f64, f64), (f64, f64))) -> f64 {
    let pv = (p.1 .0 - p.0 .0, p.1 .1 - p.0 .1);
    let qv = (q.1 .0 - q.0 .0, q.1 .1 - q.0 .1);
    let lp = (pv.0 * pv.0 + pv.1 * pv.1).sqrt();
    let lq = (qv.0 * qv.0 + qv.1 * qv.1).sqrt();
    if lp < 1e-9 || lq < 1e-9 {
        return 0.0;
    }
    let lavg = (lp + lq) / 2.0;
    let pm = midpoint(p.0, p.1);
    let qm = midpoint(q.0, q.1);

    let angle = ((pv.0 * qv.0 + pv.1 * qv.1) / (lp * lq)).abs();
    let scale = 2.0 / (lavg / lp.min(lq) + lp.max(lq) / lavg);
    let position = lavg / (lavg + segment_length(pm, qm));
    let visibility = visibility_compat(p, q).min(visibility_compat(q, p));
    angle * scale * position * visibility
}

fn visibility_compat(p: ((f64, f64), (f64, f64)), q: ((f64, f64), (f64, f64))) -> f64 {
    let i0 = project(q.0, p);
    let i1 = project(q.1, p);
    let im = midpoint(i0, i1);
    let pm = midpoint(p.0, p.1);
    let denom = segment_length(i0, i1) / 2.0;
    if denom < 1e-9 {
        return 0.0;
    }
    (1.0 - segment_length(pm, im) / denom).max(0.0)
}

fn project(point: (f64, f64), onto: ((f64, f64), (f64, f64))) -> (f64, f64) {
    let v = (onto.1 .0 - onto.0 .0, onto.1 .1 - onto.0 .1);
    let len2 = v.0 * v.0 + v.1 * v.1;
    if len2 < 1e-18 {
        return onto.0;
    }
    let t = ((point.0 - onto.0 .0) * v.0 + (point.1 - onto.0 .1) * v.1) / len2;
    (onto.0 .0 + t * v.0, onto.0 .1 + t * v.1)
}

/// Attachment points of the edge between two motifs: where the
/// anchor-to-anchor segment leaves the first contour and enters the
/// second. Falls back to the anchors when the segment misses a contour.
fn boundary_endpoints(a: &Motif, b: &Motif) -> ((f64, f64), (f64, f64)) {
    let pa = a.anchor;
    let pb = b.anchor;
    let ta = a
        .contour
        .segment_crossings(pa, pb)
        .last()
        .copied();
    let tb = b.contour.segment_crossings(pa, pb).first().copied();
    let lerp = |t: f64| {
        (
            pa.0 + t * (pb.0 - pa.0),
            pa.1 + t * (pb.1 - pa.1),
        )
    };
    match (ta, tb) {
        (Some(ta), Some(tb)) if ta < tb => (lerp(ta), lerp(tb)),
        _ => (pa, pb),
    }
}
