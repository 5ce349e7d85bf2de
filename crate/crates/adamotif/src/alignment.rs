//! Soft node-to-node similarity between two graphs and one-to-one
//! matching extraction.
//!
//! The similarity is a low-rank spectral construction: top-k eigenpairs
//! (by magnitude) of each adjacency matrix, sign-fixed for determinism,
//! combined as `S = sum_i w_i u_i v_i^T` with `w_i = sqrt(|l_i^A l_i^B|)`.
//! Matching greedily accepts pairs by `sim x sqrt((1+deg_u)(1+deg_v))`
//! score, ignoring pairs whose similarity falls below a quantile of all
//! similarity entries.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

mod spectral;

/// Dense cross-graph similarity with row/column node identities.
#[derive(Debug, Clone)]
pub struct SimilarityMatrix {
    row_ids: Vec<NodeId>,
    col_ids: Vec<NodeId>,
    data: Vec<f64>,
}

impl SimilarityMatrix {
    pub fn rows(&self) -> usize {
        self.row_ids.len()
    }

    pub fn cols(&self) -> usize {
        self.col_ids.len()
    }

    pub fn row_ids(&self) -> &[NodeId] {
        &self.row_ids
    }

    pub fn col_ids(&self) -> &[NodeId] {
        &self.col_ids
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.col_ids.len() + col]
    }

    /// Value for a node pair by identity.
    pub fn value(&self, a: &NodeId, b: &NodeId) -> Option<f64> {
        let r = self.row_ids.iter().position(|id| id == a)?;
        let c = self.col_ids.iter().position(|id| id == b)?;
        Some(self.get(r, c))
    }
}

/// One-to-one matched pairs plus the leftover nodes on both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlignmentMatching {
    pairs: Vec<(NodeId, NodeId)>,
    unmatched_a: Vec<NodeId>,
    unmatched_b: Vec<NodeId>,
}

impl AlignmentMatching {
    /// Builds a matching from explicit pairs over the two node sets.
    pub fn new(
        pairs: Vec<(NodeId, NodeId)>,
        a_nodes: &[NodeId],
        b_nodes: &[NodeId],
    ) -> Result<AlignmentMatching> {
        let mut seen_a = BTreeSet::new();
        let mut seen_b = BTreeSet::new();
        for (a, b) in &pairs {
            if !a_nodes.contains(a) || !b_nodes.contains(b) {
                return Err(Error::domain(format!(
                    "pair ({a}, {b}) references a node outside the graphs"
                )));
            }
            if !seen_a.insert(a.clone()) || !seen_b.insert(b.clone()) {
                return Err(Error::domain(format!(
                    "pair ({a}, {b}) breaks the one-to-one property"
                )));
            }
        }
        let unmatched_a = a_nodes
            .iter()
            .filter(|id| !seen_a.contains(id))
            .cloned()
            .collect();
        let unmatched_b = b_nodes
            .iter()
            .filter(|id| !seen_b.contains(id))
            .cloned()
            .collect();
        Ok(AlignmentMatching {
            pairs,
            unmatched_a,
            unmatched_b,
        })
    }

    pub fn pairs(&self) -> &[(NodeId, NodeId)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn unmatched_a(&self) -> &[NodeId] {
        &self.unmatched_a
    }

    pub fn unmatched_b(&self) -> &[NodeId] {
        &self.unmatched_b
    }

    pub fn partner_of_a(&self, a: &NodeId) -> Option<&NodeId> {
        self.pairs.iter().find(|(x, _)| x == a).map(|(_, y)| y)
    }

    pub fn partner_of_b(&self, b: &NodeId) -> Option<&NodeId> {
        self.pairs.iter().find(|(_, y)| y == b).map(|(x, _)| x)
    }
}

/// Computes the dense similarity matrix between two graphs.
///
/// `rank` caps the number of eigenpairs; the effective rank is
/// `min(rank, |V|-1)` per side. Symmetric role: `align(a, b)` equals the
/// transpose of `align(b, a)` up to numerical tolerance.
pub fn align(a: &Graph, b: &Graph, rank: usize) -> Result<SimilarityMatrix> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::domain("cannot align an empty graph"));
    }
    let na = a.node_count();
    let nb = b.node_count();
    let k = rank.min(na.saturating_sub(1)).min(nb.saturating_sub(1));

    let row_ids: Vec<NodeId> = a.nodes().cloned().collect();
    let col_ids: Vec<NodeId> = b.nodes().cloned().collect();
    let mut data = vec![0.0; na * nb];

    if k > 0 {
        let ea = spectral::top_eigenpairs(a, k)?;
        let eb = spectral::top_eigenpairs(b, k)?;
        let k = ea.len().min(eb.len());
        for t in 0..k {
            let (la, ua) = &ea[t];
            let (lb, ub) = &eb[t];
            let w = (la.abs() * lb.abs()).sqrt();
            if w == 0.0 {
                continue;
            }
            for (i, &ui) in ua.iter().enumerate() {
                let wi = w * ui;
                for (j, &vj) in ub.iter().enumerate() {
                    data[i * nb + j] += wi * vj;
                }
            }
        }
    }

    Ok(SimilarityMatrix {
        row_ids,
        col_ids,
        data,
    })
}

/// Extracts a one-to-one matching from a similarity matrix.
///
/// Candidate pairs are scored by `sim(u,v) x sqrt((1+deg u)(1+deg v))`,
/// sorted descending, and accepted while both endpoints are unused and
/// `sim(u,v)` reaches the `quantile_threshold` quantile of all entries.
/// Ties break by `(id_a, id_b)` lexicographic order.
pub fn match_nodes(
    sim: &SimilarityMatrix,
    a: &Graph,
    b: &Graph,
    quantile_threshold: f64,
) -> Result<AlignmentMatching> {
    if sim.rows() != a.node_count() || sim.cols() != b.node_count() {
        return Err(Error::domain(format!(
            "similarity matrix is {}x{} but graphs have {} and {} nodes",
            sim.rows(),
            sim.cols(),
            a.node_count(),
            b.node_count()
        )));
    }
    if !(0.0..=1.0).contains(&quantile_threshold) {
        return Err(Error::domain("quantile threshold must lie in [0, 1]"));
    }

    let cutoff = quantile(&sim.data, quantile_threshold);

    struct Candidate {
        score: f64,
        sim: f64,
        row: usize,
        col: usize,
    }
    let mut candidates = Vec::with_capacity(sim.rows() * sim.cols());
    for (row, ra) in sim.row_ids.iter().enumerate() {
        let deg_a = a.degree(ra)? as f64;
        for (col, cb) in sim.col_ids.iter().enumerate() {
            let deg_b = b.degree(cb)? as f64;
            let s = sim.get(row, col);
            candidates.push(Candidate {
                score: s * ((1.0 + deg_a) * (1.0 + deg_b)).sqrt(),
                sim: s,
                row,
                col,
            });
        }
    }
    candidates.sort_by(|x, y| {
        y.score
            .partial_cmp(&x.score)
            .expect("finite scores")
            .then_with(|| sim.row_ids[x.row].cmp(&sim.row_ids[y.row]))
            .then_with(|| sim.col_ids[x.col].cmp(&sim.col_ids[y.col]))
    });

    let mut used_a = vec![false; sim.rows()];
    let mut used_b = vec![false; sim.cols()];
    let mut pairs = Vec::new();
    for c in &candidates {
        if used_a[c.row] || used_b[c.col] || c.sim < cutoff {
            continue;
        }
        used_a[c.row] = true;
        used_b[c.col] = true;
        pairs.push((sim.row_ids[c.row].clone(), sim.col_ids[c.col].clone()));
    }

    let matched_a: BTreeSet<&NodeId> = pairs.iter().map(|(x, _)| x).collect();
    let matched_b: BTreeSet<&NodeId> = pairs.iter().map(|(_, y)| y).collect();
    let unmatched_a = sim
        .row_ids
        .iter()
        .filter(|id| !matched_a.contains(id))
        .cloned()
        .collect();
    let unmatched_b = sim
        .col_ids
        .iter()
        .filter(|id| !matched_b.contains(id))
        .cloned()
        .collect();

    Ok(AlignmentMatching {
        pairs,
        unmatched_a,
        unmatched_b,
    })
}

/// Empirical quantile with linear interpolation between order statistics.
fn quantile(values: &[f64], q: f64) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite similarities"));
    if sorted.is_empty() {
        return 0.0;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        let frac = pos - lo as f64;
        sorted[lo] * (1.0 - frac) + sorted[hi] * frac
    }
}
