//! Force-directed layout plus the similarity-aware representative layout
//! and the difference-aware individual layout.
//!
//! The simulator is displacement-based with a linearly decaying
//! temperature cap: pairwise repulsion (Barnes-Hut approximated above 500
//! nodes), spring attraction toward the ideal link length, and a weak
//! centering pull. Positions are recentered exactly at the end, so the
//! centroid sits on the origin.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::alignment::AlignmentMatching;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::supergraph::SuperGraph;

const BARNES_HUT_CUTOFF: usize = 500;
const BARNES_HUT_THETA: f64 = 0.9;
// Damping on the force-to-displacement step; keeps the descent stable so
// the energy decreases through the cooling schedule.
const STEP_DAMPING: f64 = 0.08;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LayoutParams {
    /// Ideal edge length in px.
    pub ideal_link_length: f64,
    pub repulsion_strength: f64,
    pub centering_strength: f64,
    pub iterations: usize,
    pub initial_temperature: f64,
    /// Fraction of the temperature shed linearly over the run (1 = cool
    /// to zero).
    pub decay: f64,
    pub seed: u64,
}

impl Default for LayoutParams {
    fn default() -> Self {
        LayoutParams {
            ideal_link_length: 30.0,
            repulsion_strength: 1.0,
            centering_strength: 0.02,
            iterations: 300,
            initial_temperature: 200.0,
            decay: 1.0,
            seed: 42,
        }
    }
}

/// Final node coordinates in px, total over the laid-out node set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Positions {
    map: BTreeMap<NodeId, (f64, f64)>,
}

impl Positions {
    pub fn new(map: BTreeMap<NodeId, (f64, f64)>) -> Self {
        Positions { map }
    }

    pub fn get(&self, v: &NodeId) -> Option<(f64, f64)> {
        self.map.get(v).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&NodeId, (f64, f64))> {
        self.map.iter().map(|(k, &v)| (k, v))
    }

    pub fn coords(&self) -> Vec<(f64, f64)> {
        self.map.values().copied().collect()
    }
}

/// Ring size bins for hidden-neighbor counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RingLevel {
    Small,
    Medium,
    Large,
}

impl RingLevel {
    /// 1 -> small, 2-3 -> medium, >= 4 -> large.
    pub fn from_hidden_count(count: usize) -> Option<RingLevel> {
        match count {
            0 => None,
            1 => Some(RingLevel::Small),
            2 | 3 => Some(RingLevel::Medium),
            _ => Some(RingLevel::Large),
        }
    }
}

/// Visual encoding of one representative node in an individual motif.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NodeEncoding {
    /// Matched, no hidden neighbors.
    Plain,
    /// No counterpart in the individual subgraph (white, dashed boundary).
    Absent,
    /// Matched to a node that touches unmatched individual nodes.
    Ringed { level: RingLevel, hidden_count: usize },
}

/// Representative-node positions plus per-node encodings and the dashed
/// edge set.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoratedLayout {
    pub positions: Positions,
    pub encodings: BTreeMap<NodeId, NodeEncoding>,
    pub dashed_edges: BTreeSet<(NodeId, NodeId)>,
}

impl DecoratedLayout {
    /// All-plain decoration over existing positions.
    pub fn plain(positions: Positions) -> Self {
        let encodings = positions
            .iter()
            .map(|(v, _)| (v.clone(), NodeEncoding::Plain))
            .collect();
        DecoratedLayout {
            positions,
            encodings,
            dashed_edges: BTreeSet::new(),
        }
    }
}

/// Seeded force-directed layout. Deterministic for a fixed seed; the
/// centroid of the returned positions is the origin.
pub fn force_layout(g: &Graph, params: &LayoutParams) -> Positions {
    let coords = simulate(g, params, None);
    wrap_positions(g, coords)
}

/// Runs the simulation, invoking `observer` with the positions after
/// every iteration (used by energy diagnostics and tests).
pub fn force_layout_observed(
    g: &Graph,
    params: &LayoutParams,
    observer: &mut dyn FnMut(&[(f64, f64)]),
) -> Positions {
    let coords = simulate(g, params, Some(observer));
    wrap_positions(g, coords)
}

fn wrap_positions(g: &Graph, coords: Vec<(f64, f64)>) -> Positions {
    let map = g
        .nodes()
        .cloned()
        .zip(coords)
        .collect::<BTreeMap<NodeId, (f64, f64)>>();
    Positions { map }
}

fn simulate(
    g: &Graph,
    params: &LayoutParams,
    mut observer: Option<&mut dyn FnMut(&[(f64, f64)])>,
) -> Vec<(f64, f64)> {
    let n = g.node_count();
    if n == 0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let spread = params.ideal_link_length * (n as f64).sqrt().max(1.0);
    let mut pos: Vec<(f64, f64)> = (0..n)
        .map(|_| {
            (
                (rng.gen::<f64>() - 0.5) * spread,
                (rng.gen::<f64>() - 0.5) * spread,
            )
        })
        .collect();
    if n == 1 {
        return vec![(0.0, 0.0)];
    }

    let link = params.ideal_link_length.max(1e-9);
    let iterations = params.iterations.max(1);
    let mut disp = vec![(0.0f64, 0.0f64); n];

    for it in 0..iterations {
        for d in disp.iter_mut() {
            *d = (0.0, 0.0);
        }

        // Repulsion: k^2/d per pair, scaled by repulsion_strength.
        if n > BARNES_HUT_CUTOFF {
            let tree = QuadTree::build(&pos);
            for (i, d) in disp.iter_mut().enumerate() {
                let (fx, fy) = tree.repulsion_at(pos[i], BARNES_HUT_THETA);
                d.0 += params.repulsion_strength * link * link * fx;
                d.1 += params.repulsion_strength * link * link * fy;
            }
        } else {
            for i in 0..n {
                for j in (i + 1)..n {
                    let dx = pos[i].0 - pos[j].0;
                    let dy = pos[i].1 - pos[j].1;
                    let d2 = (dx * dx + dy * dy).max(1e-9);
                    // Magnitude k^2/d, i.e. coefficient k^2/d^2 on (dx, dy).
                    let f = params.repulsion_strength * link * link / d2;
                    disp[i].0 += f * dx;
                    disp[i].1 += f * dy;
                    disp[j].0 -= f * dx;
                    disp[j].1 -= f * dy;
                }
            }
        }

        // Spring attraction: d^2/k along each edge.
        for &(a, b) in g.edges_idx() {
            let dx = pos[a].0 - pos[b].0;
            let dy = pos[a].1 - pos[b].1;
            let d = (dx * dx + dy * dy).sqrt().max(1e-9);
            let f = d * d / link;
            let (ux, uy) = (dx / d, dy / d);
            disp[a].0 -= f * ux;
            disp[a].1 -= f * uy;
            disp[b].0 += f * ux;
            disp[b].1 += f * uy;
        }

        // Weak centering.
        for (i, d) in disp.iter_mut().enumerate() {
            d.0 -= params.centering_strength * pos[i].0;
            d.1 -= params.centering_strength * pos[i].1;
        }

        // Damped displacement, capped by the linearly decaying temperature.
        let progress = it as f64 / iterations as f64;
        let temp = (params.initial_temperature * (1.0 - params.decay * progress)).max(link * 0.01);
        for i in 0..n {
            let (dx, dy) = disp[i];
            let len = (dx * dx + dy * dy).sqrt();
            if len > 1e-12 {
                let step = (len * STEP_DAMPING).min(temp);
                pos[i].0 += dx / len * step;
                pos[i].1 += dy / len * step;
            }
        }

        if let Some(obs) = observer.as_mut() {
            obs(&pos);
        }
    }

    // Exact recentering: centroid to the origin.
    let cx = pos.iter().map(|p| p.0).sum::<f64>() / n as f64;
    let cy = pos.iter().map(|p| p.1).sum::<f64>() / n as f64;
    for p in pos.iter_mut() {
        p.0 -= cx;
        p.1 -= cy;
    }
    pos
}

/// System energy under the same force model; used to check that the
/// cooling schedule descends.
pub fn layout_energy(g: &Graph, pos: &[(f64, f64)], params: &LayoutParams) -> f64 {
    let n = pos.len();
    let link = params.ideal_link_length.max(1e-9);
    let mut e = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let dx = pos[i].0 - pos[j].0;
            let dy = pos[i].1 - pos[j].1;
            let d = (dx * dx + dy * dy).sqrt().max(1e-9);
            // Potential of a k^2/d force field.
            e -= params.repulsion_strength * link * link * d.ln();
        }
    }
    for &(a, b) in g.edges_idx() {
        let dx = pos[a].0 - pos[b].0;
        let dy = pos[a].1 - pos[b].1;
        let d = (dx * dx + dy * dy).sqrt();
        e += d * d * d / (3.0 * link);
    }
    for p in pos {
        e += 0.5 * params.centering_strength * (p.0 * p.0 + p.1 * p.1);
    }
    e
}

/// Lays out the super-graph once and copies coordinates to every member
/// through its provenance map. Mutually aligned nodes therefore land on
/// identical coordinates across members.
pub fn representative_layouts(sg: &SuperGraph, params: &LayoutParams) -> Vec<Positions> {
    let base = force_layout(sg.graph(), params);
    (0..sg.member_count())
        .map(|m| {
            let map = sg
                .provenance(m)
                .iter()
                .map(|(src, dst)| {
                    let coord = base.get(dst).expect("provenance targets are laid out");
                    (src.clone(), coord)
                })
                .collect();
            Positions::new(map)
        })
        .collect()
}

/// Derives the difference-aware decoration of an individual community
/// against its representative.
///
/// Positions are the representative's, verbatim. Unmatched representative
/// nodes become absent (their incident representative edges turn dashed);
/// a matched node whose individual counterpart touches unmatched
/// individual nodes is ringed with the bin of that count.
pub fn difference_layout(
    individual: &Graph,
    representative: &Graph,
    rep_positions: &Positions,
    matching: &AlignmentMatching,
) -> Result<DecoratedLayout> {
    for v in representative.nodes() {
        if rep_positions.get(v).is_none() {
            return Err(Error::domain(format!(
                "representative node `{v}` has no position"
            )));
        }
    }

    let mut encodings: BTreeMap<NodeId, NodeEncoding> = BTreeMap::new();
    let mut dashed_edges: BTreeSet<(NodeId, NodeId)> = BTreeSet::new();

    for v in representative.nodes() {
        match matching.partner_of_a(v) {
            None => {
                encodings.insert(v.clone(), NodeEncoding::Absent);
                for w in representative.neighbors(v)? {
                    let (a, b) = if v < w { (v.clone(), w.clone()) } else { (w.clone(), v.clone()) };
                    dashed_edges.insert((a, b));
                }
            }
            Some(u) => {
                let hidden_count = individual
                    .neighbors(u)?
                    .filter(|w| matching.partner_of_b(w).is_none())
                    .count();
                let encoding = match RingLevel::from_hidden_count(hidden_count) {
                    None => NodeEncoding::Plain,
                    Some(level) => NodeEncoding::Ringed {
                        level,
                        hidden_count,
                    },
                };
                encodings.insert(v.clone(), encoding);
            }
        }
    }

    let positions = Positions::new(
        representative
            .nodes()
            .map(|v| (v.clone(), rep_positions.get(v).expect("checked above")))
            .collect(),
    );

    Ok(DecoratedLayout {
        positions,
        encodings,
        dashed_edges,
    })
}

/// Quadtree for Barnes-Hut repulsion.
struct QuadTree {
    nodes: Vec<QuadNode>,
}

struct QuadNode {
    cx: f64,
    cy: f64,
    half: f64,
    mass: f64,
    mass_x: f64,
    mass_y: f64,
    children: Option<[usize; 4]>,
    point: Option<(f64, f64)>,
}

impl QuadTree {
    fn build(points: &[(f64, f64)]) -> QuadTree {
        let (mut min_x, mut min_y) = (f64::INFINITY, f64::INFINITY);
        let (mut max_x, mut max_y) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for &(x, y) in points {
            min_x = min_x.min(x);
            min_y = min_y.min(y);
            max_x = max_x.max(x);
            max_y = max_y.max(y);
        }
        let half = ((max_x - min_x).max(max_y - min_y) / 2.0).max(1e-6) * 1.0001;
        let cx = (min_x + max_x) / 2.0;
        let cy = (min_y + max_y) / 2.0;
        let mut tree = QuadTree {
            nodes: vec![QuadNode::empty(cx, cy, half)],
        };
        for &p in points {
            tree.insert(0, p, 0);
        }
        tree
    }

    fn insert(&mut self, idx: usize, p: (f64, f64), depth: usize) {
        self.nodes[idx].mass += 1.0;
        self.nodes[idx].mass_x += p.0;
        self.nodes[idx].mass_y += p.1;

        if depth >= 48 {
            // Coincident points accumulate as mass only.
            return;
        }
        if self.nodes[idx].children.is_none() {
            match self.nodes[idx].point {
                None if self.nodes[idx].mass <= 1.0 => {
                    self.nodes[idx].point = Some(p);
                    return;
                }
                _ => {
                    let existing = self.nodes[idx].point.take();
                    self.split(idx);
                    if let Some(q) = existing {
                        let child = self.child_for(idx, q);
                        self.insert_child_only(child, q, depth + 1);
                    }
                }
            }
        }
        let child = self.child_for(idx, p);
        self.insert_child_only(child, p, depth + 1);
    }

    fn insert_child_only(&mut self, idx: usize, p: (f64, f64), depth: usize) {
        self.insert(idx, p, depth);
    }

    fn split(&mut self, idx: usize) {
        let (cx, cy, half) = {
            let node = &self.nodes[idx];
            (node.cx, node.cy, node.half)
        };
        let h = half / 2.0;
        let mut children = [0usize; 4];
        for (q, child) in children.iter_mut().enumerate() {
            let ox = if q % 2 == 0 { -h } else { h };
            let oy = if q < 2 { -h } else { h };
            *child = self.nodes.len();
            self.nodes.push(QuadNode::empty(cx + ox, cy + oy, h));
        }
        self.nodes[idx].children = Some(children);
    }

    fn child_for(&self, idx: usize, p: (f64, f64)) -> usize {
        let node = &self.nodes[idx];
        let children = node.children.expect("split before descend");
        let mut q = 0;
        if p.0 >= node.cx {
            q += 1;
        }
        if p.1 >= node.cy {
            q += 2;
        }
        children[q]
    }

    /// Net 1/d repulsion direction at `p` (unnormalized by strength).
    fn repulsion_at(&self, p: (f64, f64), theta: f64) -> (f64, f64) {
        let mut stack = vec![0usize];
        let (mut fx, mut fy) = (0.0, 0.0);
        while let Some(idx) = stack.pop() {
            let node = &self.nodes[idx];
            if node.mass == 0.0 {
                continue;
            }
            let mx = node.mass_x / node.mass;
            let my = node.mass_y / node.mass;
            let dx = p.0 - mx;
            let dy = p.1 - my;
            let d2 = dx * dx + dy * dy;
            let width = node.half * 2.0;
            if node.children.is_none() || width * width < theta * theta * d2 {
                if d2 > 1e-12 {
                    let f = node.mass / d2;
                    fx += f * dx;
                    fy += f * dy;
                }
            } else if let Some(children) = node.children {
                stack.extend(children);
            }
        }
        (fx, fy)
    }
}

impl QuadNode {
    fn empty(cx: f64, cy: f64, half: f64) -> QuadNode {
        QuadNode {
            cx,
            cy,
            half,
            mass: 0.0,
            mass_x: 0.0,
            mass_y: 0.0,
            children: None,
            point: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alignment::{align, match_nodes};
    use crate::supergraph::{synthesize_supergraph, AlignParams};

    #[test]
    fn single_node_sits_at_center() {
        let g = {
            let mut b = crate::graph::GraphBuilder::new();
            b.add_node("solo");
            b.build().0
        };
        let p = force_layout(&g, &LayoutParams::default());
        assert_eq!(p.get(&NodeId::from("solo")), Some((0.0, 0.0)));
    }

    #[test]
    fn pair_settles_near_ideal_length() {
        let g = Graph::from_edges([("a", "b")]);
        let params = LayoutParams {
            iterations: 600,
            ..LayoutParams::default()
        };
        let p = force_layout(&g, &params);
        let (ax, ay) = p.get(&NodeId::from("a")).unwrap();
        let (bx, by) = p.get(&NodeId::from("b")).unwrap();
        let d = ((ax - bx).powi(2) + (ay - by).powi(2)).sqrt();
        let ideal = params.ideal_link_length;
        assert!(
            (d - ideal).abs() <= 0.2 * ideal,
            "equilibrium distance {d} not within 20% of {ideal}"
        );
        let mid = ((ax + bx) / 2.0, (ay + by) / 2.0);
        assert!(mid.0.abs() < 1e-6 && mid.1.abs() < 1e-6);
    }

    #[test]
    fn layout_is_deterministic() {
        let g = Graph::from_edges([("a", "b"), ("b", "c"), ("c", "a"), ("c", "d")]);
        let p1 = force_layout(&g, &LayoutParams::default());
        let p2 = force_layout(&g, &LayoutParams::default());
        assert_eq!(p1, p2);
    }

    #[test]
    fn centroid_is_exactly_recentered() {
        let g = Graph::from_edges([("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]);
        let p = force_layout(&g, &LayoutParams::default());
        let coords = p.coords();
        let cx: f64 = coords.iter().map(|c| c.0).sum::<f64>() / coords.len() as f64;
        let cy: f64 = coords.iter().map(|c| c.1).sum::<f64>() / coords.len() as f64;
        assert!(cx.abs() < 1e-6 && cy.abs() < 1e-6);
    }

    #[test]
    fn energy_mostly_decreases() {
        let g = Graph::from_edges([
            ("a", "b"),
            ("b", "c"),
            ("c", "a"),
            ("c", "d"),
            ("d", "e"),
            ("e", "f"),
            ("f", "d"),
        ]);
        let params = LayoutParams::default();
        let mut energies = Vec::new();
        force_layout_observed(&g, &params, &mut |pos| {
            energies.push(layout_energy(&g, pos, &params));
        });
        let decreasing = energies
            .windows(2)
            .filter(|w| w[1] <= w[0] + 1e-9)
            .count();
        let ratio = decreasing as f64 / (energies.len() - 1) as f64;
        assert!(ratio >= 0.95, "energy decreased in only {ratio:.2} of steps");
    }

    #[test]
    fn singleton_cluster_layout_is_its_own_force_layout() {
        let g = Graph::from_edges([("a", "b"), ("b", "c"), ("c", "a"), ("c", "d")]);
        let sg = synthesize_supergraph(std::slice::from_ref(&g), &AlignParams::default()).unwrap();
        let params = LayoutParams::default();
        let layouts = representative_layouts(&sg, &params);
        assert_eq!(layouts.len(), 1);
        assert_eq!(layouts[0], force_layout(&g, &params));
    }

    #[test]
    fn representative_layout_is_pure_coordinate_copy() {
        let a = Graph::from_edges([("a1", "a2"), ("a2", "a3"), ("a3", "a1"), ("a3", "a4"), ("a4", "a5")]);
        let b = Graph::from_edges([("b1", "b2"), ("b2", "b3"), ("b3", "b1"), ("b3", "b4"), ("b4", "b5")]);
        let sg = synthesize_supergraph(&[a, b], &AlignParams::default()).unwrap();
        let layouts = representative_layouts(&sg, &LayoutParams::default());
        let base = force_layout(sg.graph(), &LayoutParams::default());
        let base_coords: Vec<(f64, f64)> = base.coords();
        for (m, layout) in layouts.iter().enumerate() {
            for (src, coord) in layout.iter() {
                let target = &sg.provenance(m)[src];
                assert_eq!(base.get(target), Some(coord), "copied coordinate differs");
                assert!(base_coords.contains(&coord));
            }
        }
        // Mutually aligned nodes coincide across the two members.
        for (src0, dst0) in sg.provenance(0) {
            for (src1, dst1) in sg.provenance(1) {
                if dst0 == dst1 {
                    assert_eq!(layouts[0].get(src0), layouts[1].get(src1));
                }
            }
        }
    }

    #[test]
    fn difference_layout_full_match_is_all_plain() {
        let rep = Graph::from_edges([("a", "b"), ("b", "c"), ("b", "d"), ("c", "d"), ("d", "e")]);
        let pos = force_layout(&rep, &LayoutParams::default());
        let sim = align(&rep, &rep, 8).unwrap();
        let matching = match_nodes(&sim, &rep, &rep, 0.0).unwrap();
        let dl = difference_layout(&rep, &rep, &pos, &matching).unwrap();
        assert!(dl.dashed_edges.is_empty());
        assert!(dl
            .encodings
            .values()
            .all(|e| matches!(e, NodeEncoding::Plain)));
        assert_eq!(dl.positions, pos);
    }

    #[test]
    fn ring_binning_is_exact() {
        assert_eq!(RingLevel::from_hidden_count(0), None);
        assert_eq!(RingLevel::from_hidden_count(1), Some(RingLevel::Small));
        assert_eq!(RingLevel::from_hidden_count(2), Some(RingLevel::Medium));
        assert_eq!(RingLevel::from_hidden_count(3), Some(RingLevel::Medium));
        assert_eq!(RingLevel::from_hidden_count(4), Some(RingLevel::Large));
        assert_eq!(RingLevel::from_hidden_count(9), Some(RingLevel::Large));
    }

    #[test]
    fn missing_position_is_domain_error() {
        let rep = Graph::from_edges([("a", "b")]);
        let ind = Graph::from_edges([("x", "y")]);
        let sim = align(&rep, &ind, 8).unwrap();
        let matching = match_nodes(&sim, &rep, &ind, 0.0).unwrap();
        let empty = Positions::new(BTreeMap::new());
        assert!(difference_layout(&ind, &rep, &empty, &matching).is_err());
    }
}
