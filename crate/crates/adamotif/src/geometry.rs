//! Contour geometry: alpha shapes over Delaunay triangulations and
//! polygon buffering by disc Minkowski sums.

use serde::{Deserialize, Serialize};

/// Simple polygon with counterclockwise orientation and implicit closure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polygon {
    vertices: Vec<(f64, f64)>,
}

impl Polygon {
    /// Wraps a vertex ring, normalizing to counterclockwise orientation.
    pub fn new(mut vertices: Vec<(f64, f64)>) -> Polygon {
        if signed_area(&vertices) < 0.0 {
            vertices.reverse();
        }
        Polygon { vertices }
    }

    pub fn vertices(&self) -> &[(f64, f64)] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices).abs()
    }

    /// Area centroid.
    pub fn centroid(&self) -> (f64, f64) {
        let n = self.vertices.len();
        if n == 0 {
            return (0.0, 0.0);
        }
        let a = signed_area(&self.vertices);
        if a.abs() < 1e-12 {
            // Degenerate ring: fall back to the vertex mean.
            let (sx, sy) = self
                .vertices
                .iter()
                .fold((0.0, 0.0), |(sx, sy), &(x, y)| (sx + x, sy + y));
            return (sx / n as f64, sy / n as f64);
        }
        let (mut cx, mut cy) = (0.0, 0.0);
        for i in 0..n {
            let (x0, y0) = self.vertices[i];
            let (x1, y1) = self.vertices[(i + 1) % n];
            let cross = x0 * y1 - x1 * y0;
            cx += (x0 + x1) * cross;
            cy += (y0 + y1) * cross;
        }
        (cx / (6.0 * a), cy / (6.0 * a))
    }

    /// Strict interior test (boundary points count as outside).
    pub fn contains(&self, p: (f64, f64)) -> bool {
        let n = self.vertices.len();
        if n < 3 {
            return false;
        }
        let mut inside = false;
        let (px, py) = p;
        let mut j = n - 1;
        for i in 0..n {
            let (xi, yi) = self.vertices[i];
            let (xj, yj) = self.vertices[j];
            if on_segment((xj, yj), (xi, yi), p) {
                return false;
            }
            if (yi > py) != (yj > py) {
                let x_cross = (xj - xi) * (py - yi) / (yj - yi) + xi;
                if px < x_cross {
                    inside = !inside;
                }
            }
            j = i;
        }
        inside
    }

    /// Interior or boundary test with tolerance.
    pub fn contains_or_on(&self, p: (f64, f64), tol: f64) -> bool {
        if self.contains(p) {
            return true;
        }
        let n = self.vertices.len();
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            if dist_point_segment(p, a, b) <= tol {
                return true;
            }
        }
        false
    }

    /// Radius of the smallest circle centered at the centroid covering
    /// every vertex.
    pub fn bounding_radius(&self) -> f64 {
        let c = self.centroid();
        self.vertices
            .iter()
            .map(|&v| dist(c, v))
            .fold(0.0, f64::max)
    }

    pub fn translate(&mut self, dx: f64, dy: f64) {
        for v in &mut self.vertices {
            v.0 += dx;
            v.1 += dy;
        }
    }

    pub fn scale_about(&mut self, center: (f64, f64), factor: f64) {
        for v in &mut self.vertices {
            v.0 = center.0 + (v.0 - center.0) * factor;
            v.1 = center.1 + (v.1 - center.1) * factor;
        }
    }

    /// Checks simplicity (no two non-adjacent edges intersect).
    pub fn is_simple(&self) -> bool {
        let n = self.vertices.len();
        if n < 3 {
            return false;
        }
        for i in 0..n {
            let a1 = self.vertices[i];
            let a2 = self.vertices[(i + 1) % n];
            for j in (i + 1)..n {
                // Skip adjacent edges (sharing an endpoint).
                if j == i || (j + 1) % n == i || (i + 1) % n == j {
                    continue;
                }
                let b1 = self.vertices[j];
                let b2 = self.vertices[(j + 1) % n];
                if segments_intersect(a1, a2, b1, b2) {
                    return false;
                }
            }
        }
        true
    }

    /// All intersection parameters of segment `a -> b` with the boundary,
    /// as `t` values along the segment.
    pub fn segment_crossings(&self, a: (f64, f64), b: (f64, f64)) -> Vec<f64> {
        let n = self.vertices.len();
        let mut ts = Vec::new();
        for i in 0..n {
            let p = self.vertices[i];
            let q = self.vertices[(i + 1) % n];
            if let Some(t) = segment_intersection_t(a, b, p, q) {
                ts.push(t);
            }
        }
        ts.sort_by(|x, y| x.partial_cmp(y).expect("finite parameters"));
        ts
    }
}

/// Contour extraction result; `degenerate` marks the capsule fallback for
/// collinear or tiny inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contour {
    pub polygon: Polygon,
    pub degenerate: bool,
}

fn signed_area(vertices: &[(f64, f64)]) -> f64 {
    let n = vertices.len();
    if n < 3 {
        return 0.0;
    }
    let mut sum = 0.0;
    for i in 0..n {
        let (x0, y0) = vertices[i];
        let (x1, y1) = vertices[(i + 1) % n];
        sum += x0 * y1 - x1 * y0;
    }
    sum / 2.0
}

fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
}

fn on_segment(a: (f64, f64), b: (f64, f64), p: (f64, f64)) -> bool {
    dist_point_segment(p, a, b) < 1e-12
}

fn dist_point_segment(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (vx, vy) = (b.0 - a.0, b.1 - a.1);
    let len2 = vx * vx + vy * vy;
    if len2 < 1e-24 {
        return dist(p, a);
    }
    let t = ((p.0 - a.0) * vx + (p.1 - a.1) * vy) / len2;
    let t = t.clamp(0.0, 1.0);
    dist(p, (a.0 + t * vx, a.1 + t * vy))
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn segments_intersect(a1: (f64, f64), a2: (f64, f64), b1: (f64, f64), b2: (f64, f64)) -> bool {
    let d1 = cross(b1, b2, a1);
    let d2 = cross(b1, b2, a2);
    let d3 = cross(a1, a2, b1);
    let d4 = cross(a1, a2, b2);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

/// Parameter `t` along `a -> b` where it properly crosses `p -> q`.
fn segment_intersection_t(
    a: (f64, f64),
    b: (f64, f64),
    p: (f64, f64),
    q: (f64, f64),
) -> Option<f64> {
    let r = (b.0 - a.0, b.1 - a.1);
    let s = (q.0 - p.0, q.1 - p.1);
    let denom = r.0 * s.1 - r.1 * s.0;
    if denom.abs() < 1e-18 {
        return None;
    }
    let qp = (p.0 - a.0, p.1 - a.1);
    let t = (qp.0 * s.1 - qp.1 * s.0) / denom;
    let u = (qp.0 * r.1 - qp.1 * r.0) / denom;
    if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
        Some(t)
    } else {
        None
    }
}

/// Concave contour of a point set via the alpha complex: Delaunay
/// triangles with circumradius at most `alpha` are kept and the boundary
/// of the kept complex is traced. If the boundary fails to enclose every
/// input point (alpha too small), alpha doubles and the extraction
/// retries, which converges to the convex hull.
///
/// Fewer than 3 points, or collinear points, fall back to a capsule
/// around the segment or point, flagged degenerate.
pub fn alpha_shape(points: &[(f64, f64)], alpha: f64) -> Contour {
    if alpha <= 0.0 || points.len() < 3 {
        return capsule_fallback(points);
    }
    let dpoints: Vec<delaunator::Point> = points
        .iter()
        .map(|&(x, y)| delaunator::Point { x, y })
        .collect();
    let tri = delaunator::triangulate(&dpoints);
    if tri.triangles.is_empty() {
        // Collinear or duplicate-only input.
        return capsule_fallback(points);
    }

    let mut alpha = alpha;
    for _ in 0..64 {
        if let Some(polygon) = boundary_of_alpha_complex(points, &tri, alpha) {
            let ok = points
                .iter()
                .all(|&p| polygon.contains_or_on(p, 1e-7));
            if ok {
                return Contour {
                    polygon,
                    degenerate: false,
                };
            }
        }
        alpha *= 2.0;
    }
    capsule_fallback(points)
}

/// Default alpha rule: twice the median nearest-neighbor distance.
pub fn default_alpha(points: &[(f64, f64)]) -> f64 {
    if points.len() < 2 {
        return 1.0;
    }
    let mut nn: Vec<f64> = points
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            points
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &q)| dist(p, q))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    nn.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));
    let median = nn[nn.len() / 2];
    (2.0 * median).max(1e-9)
}

fn boundary_of_alpha_complex(
    points: &[(f64, f64)],
    tri: &delaunator::Triangulation,
    alpha: f64,
) -> Option<Polygon> {
    let ntri = tri.triangles.len() / 3;
    let mut kept = vec![false; ntri];
    let mut any = false;
    for t in 0..ntri {
        let a = points[tri.triangles[3 * t]];
        let b = points[tri.triangles[3 * t + 1]];
        let c = points[tri.triangles[3 * t + 2]];
        if circumradius(a, b, c) <= alpha {
            kept[t] = true;
            any = true;
        }
    }
    if !any {
        return None;
    }

    // Boundary = directed edges of kept triangles whose twin is absent or
    // belongs to a dropped triangle.
    use std::collections::HashMap;
    let mut next_on_boundary: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut boundary_count = 0usize;
    for e in 0..tri.triangles.len() {
        if !kept[e / 3] {
            continue;
        }
        let twin = tri.halfedges[e];
        let twin_kept = twin != delaunator::EMPTY && kept[twin / 3];
        if twin_kept {
            continue;
        }
        // Half-edge e runs from triangles[e] to triangles[next_halfedge(e)].
        let start = tri.triangles[e];
        let end = tri.triangles[delaunator::next_halfedge(e)];
        next_on_boundary.entry(start).or_default().push(end);
        boundary_count += 1;
    }
    if boundary_count < 3 {
        return None;
    }

    // Trace loops and keep the one with the largest area (the outer face
    // boundary); interior holes are dropped.
    let mut best: Option<Polygon> = None;
    let mut visited: HashMap<(usize, usize), bool> = HashMap::new();
    let starts: Vec<usize> = {
        let mut s: Vec<usize> = next_on_boundary.keys().copied().collect();
        s.sort_unstable();
        s
    };
    for &start in &starts {
        let succ0 = next_on_boundary[&start].clone();
        for &first in &succ0 {
            if *visited.get(&(start, first)).unwrap_or(&false) {
                continue;
            }
            let mut ring = vec![start];
            let mut prev = start;
            let mut cur = first;
            visited.insert((start, first), true);
            let mut steps = 0;
            while cur != start && steps <= boundary_count {
                ring.push(cur);
                let nexts = next_on_boundary.get(&cur)?;
                // Choose an unvisited outgoing edge, avoiding immediate
                // backtracking when possible.
                let mut chosen = None;
                for &cand in nexts {
                    if !*visited.get(&(cur, cand)).unwrap_or(&false) && cand != prev {
                        chosen = Some(cand);
                        break;
                    }
                }
                let chosen = chosen.or_else(|| {
                    nexts
                        .iter()
                        .copied()
                        .find(|&cand| !*visited.get(&(cur, cand)).unwrap_or(&false))
                })?;
                visited.insert((cur, chosen), true);
                prev = cur;
                cur = chosen;
                steps += 1;
            }
            if cur != start || ring.len() < 3 {
                continue;
            }
            let poly = Polygon::new(ring.iter().map(|&i| points[i]).collect());
            if best.as_ref().map_or(true, |b| poly.area() > b.area()) {
                best = Some(poly);
            }
        }
    }
    best
}

fn circumradius(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    let la = dist(b, c);
    let lb = dist(a, c);
    let lc = dist(a, b);
    let area = cross(a, b, c).abs() / 2.0;
    if area < 1e-18 {
        return f64::INFINITY;
    }
    la * lb * lc / (4.0 * area)
}

/// Capsule around a segment (or disc around a point), used when a proper
/// alpha shape cannot exist.
fn capsule_fallback(points: &[(f64, f64)]) -> Contour {
    const FALLBACK_RADIUS: f64 = 6.0;
    const ARC_STEPS: usize = 18;

    if points.is_empty() {
        return Contour {
            polygon: Polygon::new(Vec::new()),
            degenerate: true,
        };
    }

    // Furthest point pair spans the capsule axis.
    let (mut p0, mut p1) = (points[0], points[0]);
    let mut best = -1.0;
    for &a in points {
        for &b in points {
            let d = dist(a, b);
            if d > best {
                best = d;
                p0 = a;
                p1 = b;
            }
        }
    }

    let r = FALLBACK_RADIUS;
    if best < 1e-9 {
        let c = p0;
        let verts = (0..2 * ARC_STEPS)
            .map(|i| {
                let t = i as f64 / (2 * ARC_STEPS) as f64 * std::f64::consts::TAU;
                (c.0 + r * t.cos(), c.1 + r * t.sin())
            })
            .collect();
        return Contour {
            polygon: Polygon::new(verts),
            degenerate: true,
        };
    }

    let theta_axis = f64::atan2(p1.1 - p0.1, p1.0 - p0.0);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let pi = std::f64::consts::PI;
    let mut verts = Vec::with_capacity(2 * ARC_STEPS + 2);
    // Semi-circle around p1 (sweeping past the far end), then around p0.
    for i in 0..=ARC_STEPS {
        let t = theta_axis - half_pi + pi * i as f64 / ARC_STEPS as f64;
        verts.push((p1.0 + r * t.cos(), p1.1 + r * t.sin()));
    }
    for i in 0..=ARC_STEPS {
        let t = theta_axis + half_pi + pi * i as f64 / ARC_STEPS as f64;
        verts.push((p0.0 + r * t.cos(), p0.1 + r * t.sin()));
    }
    Contour {
        polygon: Polygon::new(verts),
        degenerate: true,
    }
}

/// Outward offset by `distance`: Minkowski sum with a disc. Convex
/// corners are rounded by arcs discretized at steps of at most 10
/// degrees; reflex corners use the miter intersection of the adjacent
/// offset edges.
pub fn buffer_polygon(polygon: &Polygon, distance: f64) -> Polygon {
    if distance == 0.0 || polygon.len() < 3 {
        return polygon.clone();
    }
    let verts = polygon.vertices();
    let n = verts.len();
    let mut out: Vec<(f64, f64)> = Vec::new();

    for i in 0..n {
        let prev = verts[(i + n - 1) % n];
        let cur = verts[i];
        let next = verts[(i + 1) % n];

        let d_in = norm2(sub(cur, prev));
        let d_out = norm2(sub(next, cur));
        if d_in < 1e-12 || d_out < 1e-12 {
            continue;
        }
        // Outward normal of a CCW polygon edge points to its right.
        let n_in = right_normal(sub(cur, prev));
        let n_out = right_normal(sub(next, cur));

        let p_in = add(cur, scale(n_in, distance));
        let p_out = add(cur, scale(n_out, distance));

        let turn = cross(prev, cur, next);
        if turn > 1e-12 {
            // Convex corner: arc from the incoming to the outgoing normal.
            let a0 = f64::atan2(n_in.1, n_in.0);
            let a1 = f64::atan2(n_out.1, n_out.0);
            let mut delta = a1 - a0;
            while delta < 0.0 {
                delta += std::f64::consts::TAU;
            }
            let steps = (delta / (10.0f64.to_radians())).ceil().max(1.0) as usize;
            for s in 0..=steps {
                let a = a0 + delta * s as f64 / steps as f64;
                out.push((cur.0 + distance * a.cos(), cur.1 + distance * a.sin()));
            }
        } else if turn < -1e-12 {
            // Reflex corner: miter joins the two offset edge lines.
            let e_in = sub(cur, prev);
            let e_out = sub(next, cur);
            match line_intersection(add(prev, scale(n_in, distance)), e_in, p_out, e_out) {
                Some(m) => out.push(m),
                None => {
                    out.push(p_in);
                    out.push(p_out);
                }
            }
        } else {
            out.push(p_in);
        }
    }
    Polygon::new(out)
}

fn sub(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 - b.0, a.1 - b.1)
}

fn add(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 + b.0, a.1 + b.1)
}

fn scale(a: (f64, f64), s: f64) -> (f64, f64) {
    (a.0 * s, a.1 * s)
}

fn norm2(a: (f64, f64)) -> f64 {
    a.0 * a.0 + a.1 * a.1
}

fn right_normal(v: (f64, f64)) -> (f64, f64) {
    let len = norm2(v).sqrt();
    (v.1 / len, -v.0 / len)
}

/// Intersection of two parameterized lines `p + t u` and `q + s v`.
fn line_intersection(
    p: (f64, f64),
    u: (f64, f64),
    q: (f64, f64),
    v: (f64, f64),
) -> Option<(f64, f64)> {
    let denom = u.0 * v.1 - u.1 * v.0;
    if denom.abs() < 1e-12 {
        return None;
    }
    let w = sub(q, p);
    let t = (w.0 * v.1 - w.1 * v.0) / denom;
    Some((p.0 + t * u.0, p.1 + t * u.1))
}
