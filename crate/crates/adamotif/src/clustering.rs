//! Two-level hierarchical clustering of community subgraphs.
//!
//! Affinity propagation picks exemplars by message passing, so each
//! cluster's representative is an actual subgraph rather than a synthetic
//! centroid. The first level clusters all community subgraphs; the second
//! clusters the chosen representatives.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::embedding::{EmbeddingVector};
use crate::error::{Error, Result};

/// Self-similarity assigned to every item; controls how many exemplars
/// emerge. Serializes as the string `"median"` or a bare number.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Preference {
    #[default]
    Median,
    Value(f64),
}

impl Serialize for Preference {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Preference::Median => serializer.serialize_str("median"),
            Preference::Value(v) => serializer.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for Preference {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Number(f64),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Text(s) if s == "median" => Ok(Preference::Median),
            Raw::Text(s) => Err(serde::de::Error::custom(format!(
                "preference must be \"median\" or a number, got \"{s}\""
            ))),
            Raw::Number(v) => Ok(Preference::Value(v)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApOptions {
    pub damping: f64,
    pub max_iter: usize,
    pub convergence_iter: usize,
    pub preference: Preference,
}

impl Default for ApOptions {
    fn default() -> Self {
        ApOptions {
            damping: 0.9,
            max_iter: 1000,
            convergence_iter: 50,
            preference: Preference::Median,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClusterLevel {
    Subgraph,
    Representative,
}

/// Dense clustering with one exemplar per cluster. `member_of[i]` is the
/// cluster of item `i`; `exemplar_of[c]` is the item index serving as
/// cluster `c`'s exemplar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterAssignment {
    pub member_of: Vec<usize>,
    pub exemplar_of: Vec<usize>,
    pub level: ClusterLevel,
    pub converged: bool,
}

impl ClusterAssignment {
    pub fn cluster_count(&self) -> usize {
        self.exemplar_of.len()
    }

    pub fn members(&self, cluster: usize) -> Vec<usize> {
        self.member_of
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == cluster)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_exemplar(&self, item: usize) -> bool {
        self.exemplar_of.contains(&item)
    }
}

/// Square similarity matrix in row-major order.
#[derive(Debug, Clone)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        SquareMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::domain("similarity matrix must be square"));
            }
            data.extend_from_slice(row);
        }
        Ok(SquareMatrix { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }
}

/// Exemplar clustering by affinity propagation message passing.
///
/// Symmetric ties are broken by a seeded jitter of magnitude
/// `1e-9 x max|s|` added to the similarities. Non-convergence within
/// `max_iter` returns the current assignment with `converged = false`.
pub fn affinity_propagation(
    similarity: &SquareMatrix,
    opts: &ApOptions,
    seed: u64,
) -> Result<ClusterAssignment> {
    run_ap(similarity, opts, seed, ClusterLevel::Subgraph)
}

fn run_ap(
    similarity: &SquareMatrix,
    opts: &ApOptions,
    seed: u64,
    level: ClusterLevel,
) -> Result<ClusterAssignment> {
    let n = similarity.n();
    if n == 0 {
        return Err(Error::domain("cannot cluster zero items"));
    }
    if !(0.5..1.0).contains(&opts.damping) {
        return Err(Error::domain("damping must lie in [0.5, 1)"));
    }
    for i in 0..n {
        for j in 0..n {
            if !similarity.get(i, j).is_finite() {
                return Err(Error::domain("similarity matrix must be finite"));
            }
        }
    }
    if n == 1 {
        return Ok(ClusterAssignment {
            member_of: vec![0],
            exemplar_of: vec![0],
            level,
            converged: true,
        });
    }

    let preference = match opts.preference {
        Preference::Value(p) => p,
        Preference::Median => {
            let mut off: Vec<f64> = Vec::with_capacity(n * (n - 1));
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        off.push(similarity.get(i, j));
                    }
                }
            }
            median(&mut off)
        }
    };

    let mut s = similarity.clone();
    for i in 0..n {
        s.set(i, i, preference);
    }
    let scale = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| s.get(i, j).abs())
        .fold(0.0f64, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..n {
        for j in 0..n {
            let jitter = 1e-9 * scale * rng.gen::<f64>();
            s.set(i, j, s.get(i, j) + jitter);
        }
    }

    let lambda = opts.damping;
    let mut responsibility = SquareMatrix::zeros(n);
    let mut availability = SquareMatrix::zeros(n);
    let mut exemplars_prev: Vec<usize> = Vec::new();
    let mut stable_iters = 0usize;
    let mut converged = false;

    for _ in 0..opts.max_iter {
        // r(i,k) <- s(i,k) - max_{k' != k} [a(i,k') + s(i,k')]
        for i in 0..n {
            let mut best = f64::NEG_INFINITY;
            let mut second = f64::NEG_INFINITY;
            let mut best_k = 0;
            for k in 0..n {
                let v = availability.get(i, k) + s.get(i, k);
                if v > best {
                    second = best;
                    best = v;
                    best_k = k;
                } else if v > second {
                    second = v;
                }
            }
            for k in 0..n {
                let cap = if k == best_k { second } else { best };
                let raw = s.get(i, k) - cap;
                responsibility.set(i, k, lambda * responsibility.get(i, k) + (1.0 - lambda) * raw);
            }
        }

        // a(i,k) <- min(0, r(k,k) + sum_{i' not in {i,k}} max(0, r(i',k)))
        // a(k,k) <- sum_{i' != k} max(0, r(i',k))
        for k in 0..n {
            let positive_sum: f64 = (0..n)
                .filter(|&i| i != k)
                .map(|i| responsibility.get(i, k).max(0.0))
                .sum();
            for i in 0..n {
                let raw = if i == k {
                    positive_sum
                } else {
                    let without_i = positive_sum - responsibility.get(i, k).max(0.0);
                    (responsibility.get(k, k) + without_i).min(0.0)
                };
                availability.set(i, k, lambda * availability.get(i, k) + (1.0 - lambda) * raw);
            }
        }

        let exemplars: Vec<usize> = (0..n)
            .filter(|&k| responsibility.get(k, k) + availability.get(k, k) > 0.0)
            .collect();
        if !exemplars.is_empty() && exemplars == exemplars_prev {
            stable_iters += 1;
            if stable_iters >= opts.convergence_iter {
                converged = true;
                break;
            }
        } else {
            stable_iters = 0;
            exemplars_prev = exemplars;
        }
    }

    let mut exemplars: Vec<usize> = (0..n)
        .filter(|&k| responsibility.get(k, k) + availability.get(k, k) > 0.0)
        .collect();
    if exemplars.is_empty() {
        // Degenerate run: elect the strongest candidate so the caller
        // always gets a valid assignment.
        let best = (0..n)
            .max_by(|&a, &b| {
                let va = responsibility.get(a, a) + availability.get(a, a);
                let vb = responsibility.get(b, b) + availability.get(b, b);
                va.partial_cmp(&vb).expect("finite criteria")
            })
            .expect("n >= 1");
        exemplars = vec![best];
    }

    // Assign every item to its most similar exemplar; exemplars stick to
    // themselves.
    let mut member_of = vec![0usize; n];
    for i in 0..n {
        if let Ok(c) = exemplars.binary_search(&i) {
            member_of[i] = c;
            continue;
        }
        let mut best_c = 0;
        let mut best_sim = f64::NEG_INFINITY;
        for (c, &k) in exemplars.iter().enumerate() {
            let sim = s.get(i, k);
            if sim > best_sim {
                best_sim = sim;
                best_c = c;
            }
        }
        member_of[i] = best_c;
    }

    Ok(ClusterAssignment {
        member_of,
        exemplar_of: exemplars,
        level,
        converged,
    })
}

fn median(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite similarities"));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Negative squared Euclidean similarity between embeddings.
fn similarity_from_embeddings(items: &[&EmbeddingVector]) -> Result<SquareMatrix> {
    let n = items.len();
    let mut s = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let d = crate::embedding::embedding_distance(items[i], items[j])?;
            s.set(i, j, -(d * d));
        }
    }
    Ok(s)
}

/// First-level clustering over all community subgraph embeddings.
pub fn cluster_subgraphs(
    embeddings: &[EmbeddingVector],
    opts: &ApOptions,
    seed: u64,
) -> Result<ClusterAssignment> {
    if embeddings.is_empty() {
        return Err(Error::domain("need at least one embedding to cluster"));
    }
    let refs: Vec<&EmbeddingVector> = embeddings.iter().collect();
    let s = similarity_from_embeddings(&refs)?;
    run_ap(&s, opts, seed, ClusterLevel::Subgraph)
}

/// Second-level clustering over the chosen representatives. Indices in
/// the result refer to positions within `representatives`.
pub fn cluster_representatives(
    representatives: &[usize],
    embeddings: &[EmbeddingVector],
    opts: &ApOptions,
    seed: u64,
) -> Result<ClusterAssignment> {
    if representatives.is_empty() {
        return Err(Error::domain("need at least one representative to cluster"));
    }
    let refs: Vec<&EmbeddingVector> = representatives
        .iter()
        .map(|&i| {
            embeddings
                .get(i)
                .ok_or_else(|| Error::domain(format!("representative index {i} out of range")))
        })
        .collect::<Result<_>>()?;
    let s = similarity_from_embeddings(&refs)?;
    run_ap(&s, opts, seed, ClusterLevel::Representative)
}
