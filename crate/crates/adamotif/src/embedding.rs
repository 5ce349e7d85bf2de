//! Whole-subgraph embeddings from pooled characteristic functions of
//! node features over random-walk distributions.
//!
//! For each node feature x, walk scale r and evaluation point theta, the
//! per-node value is `E_w[P^r(u,w) · e^{i·theta·x_w}]`; mean-pooling the
//! real and imaginary parts over nodes gives a fixed-length vector that
//! depends only on the isomorphism class of the subgraph. Features are
//! log(1+degree) and the local clustering coefficient.
//!
//! All accumulations run through an exact (correctly rounded) summation,
//! so relabeling nodes leaves the embedding bit-identical.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Subgraph};

/// Characteristic-function sampling grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EmbeddingParams {
    /// Number of evaluation points, evenly spaced in `(0, theta_max]`.
    pub theta_count: usize,
    pub theta_max: f64,
    /// Random-walk scales (hop counts).
    pub scales: Vec<usize>,
}

impl Default for EmbeddingParams {
    fn default() -> Self {
        EmbeddingParams {
            theta_count: 16,
            theta_max: 5.0,
            scales: vec![1, 2],
        }
    }
}

impl EmbeddingParams {
    pub fn dim(&self) -> usize {
        // features x scales x eval points x (re, im)
        2 * self.scales.len() * self.theta_count * 2
    }
}

/// Fixed-length real vector describing one subgraph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingVector {
    values: Vec<f64>,
}

impl EmbeddingVector {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[cfg(test)]
    pub(crate) fn from_values(values: Vec<f64>) -> Self {
        EmbeddingVector { values }
    }
}

/// Euclidean distance between two embeddings of equal dimension.
pub fn embedding_distance(a: &EmbeddingVector, b: &EmbeddingVector) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::domain(format!(
            "embedding dimension mismatch: {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(a.values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt())
}

/// Embeds a subgraph. The subgraph's induced structure (not the parent's)
/// defines degrees, triangles and walks.
pub fn embed_subgraph(s: &Subgraph, params: &EmbeddingParams) -> Result<EmbeddingVector> {
    if s.is_empty() {
        return Err(Error::domain("cannot embed an empty subgraph"));
    }
    Ok(embed_graph(&s.to_graph(), params))
}

pub(crate) fn embed_graph(g: &Graph, params: &EmbeddingParams) -> EmbeddingVector {
    let features = node_features(g);
    let thetas: Vec<f64> = (1..=params.theta_count)
        .map(|k| params.theta_max * k as f64 / params.theta_count as f64)
        .collect();

    let max_scale = params.scales.iter().copied().max().unwrap_or(0);
    let mut values = Vec::with_capacity(params.dim());

    for feature in &features {
        for &theta in &thetas {
            // Complex wave per node, propagated by the row-normalized
            // adjacency operator one hop at a time.
            let mut re: Vec<f64> = feature.iter().map(|&x| (theta * x).cos()).collect();
            let mut im: Vec<f64> = feature.iter().map(|&x| (theta * x).sin()).collect();
            let mut pooled: Vec<(f64, f64)> = Vec::with_capacity(params.scales.len());
            for step in 1..=max_scale {
                let (next_re, next_im) = propagate(g, &re, &im);
                re = next_re;
                im = next_im;
                if params.scales.contains(&step) {
                    pooled.push((mean_exact(&re), mean_exact(&im)));
                }
            }
            for (mr, mi) in pooled {
                values.push(mr);
                values.push(mi);
            }
        }
    }
    EmbeddingVector { values }
}

/// One application of the row-normalized adjacency operator. Rows of
/// isolated nodes act as identity rows.
fn propagate(g: &Graph, re: &[f64], im: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = g.node_count();
    let mut out_re = vec![0.0; n];
    let mut out_im = vec![0.0; n];
    for u in 0..n {
        let nbrs = g.adj_idx(u);
        if nbrs.is_empty() {
            out_re[u] = re[u];
            out_im[u] = im[u];
            continue;
        }
        let deg = nbrs.len() as f64;
        out_re[u] = fsum(nbrs.iter().map(|&w| re[w])) / deg;
        out_im[u] = fsum(nbrs.iter().map(|&w| im[w])) / deg;
    }
    (out_re, out_im)
}

fn mean_exact(values: &[f64]) -> f64 {
    fsum(values.iter().copied()) / values.len() as f64
}

/// Structural node features: log(1+degree), local clustering coefficient.
fn node_features(g: &Graph) -> [Vec<f64>; 2] {
    let n = g.node_count();
    let mut log_degree = Vec::with_capacity(n);
    let mut clustering = Vec::with_capacity(n);
    for u in 0..n {
        let deg = g.degree_idx(u);
        log_degree.push(((1 + deg) as f64).ln());
        if deg < 2 {
            clustering.push(0.0);
            continue;
        }
        let nbrs = g.adj_idx(u);
        let mut triangles = 0usize;
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                if g.has_edge_idx(a, b) {
                    triangles += 1;
                }
            }
        }
        clustering.push(2.0 * triangles as f64 / (deg * (deg - 1)) as f64);
    }
    [log_degree, clustering]
}

/// Exact (correctly rounded) floating-point summation. The result is a
/// function of the multiset of inputs only, independent of their order.
pub(crate) fn fsum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut partials: Vec<f64> = Vec::new();
    for mut x in values {
        let mut i = 0;
        for j in 0..partials.len() {
            let mut y = partials[j];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                partials[i] = lo;
                i += 1;
            }
            x = hi;
        }
        partials.truncate(i);
        partials.push(x);
    }

    let mut n = partials.len();
    if n == 0 {
        return 0.0;
    }
    n -= 1;
    let mut hi = partials[n];
    let mut lo = 0.0;
    while n > 0 {
        let x = hi;
        n -= 1;
        let y = partials[n];
        hi = x + y;
        let yr = hi - x;
        lo = y - yr;
        if lo != 0.0 {
            break;
        }
    }
    // Round-half-even correction against the next partial down.
    if n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0)) {
        let y = lo * 2.0;
        let x = hi + y;
        if y == x - hi {
            hi = x;
        }
    }
    hi
}
