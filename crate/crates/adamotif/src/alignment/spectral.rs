//! Deterministic symmetric eigensolvers for adjacency spectra.
//!
//! Small graphs go through a cyclic Jacobi decomposition of the dense
//! adjacency matrix; larger graphs use Lanczos with full
//! reorthogonalization (restarted on invariant-subspace exhaustion, so
//! eigenvalue multiplicity and disconnected graphs are handled). Top-k
//! selection is by eigenvalue magnitude. Eigenvector sign ambiguity is
//! resolved by forcing the largest-magnitude entry positive.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const EIGEN_TOLERANCE: f64 = 1e-10;
const MAX_ITERATIONS: usize = 10_000;
const DENSE_CUTOFF: usize = 64;
const LANCZOS_SEED: u64 = 0xADA_707_1F;

/// Top-k eigenpairs of the graph's adjacency matrix, ordered by
/// decreasing magnitude (ties by decreasing value).
pub(super) fn top_eigenpairs(g: &Graph, k: usize) -> Result<Vec<(f64, Vec<f64>)>> {
    let n = g.node_count();
    let k = k.min(n);
    if k == 0 {
        return Ok(Vec::new());
    }
    let mut pairs = if n <= DENSE_CUTOFF {
        dense_eigenpairs(g)
    } else {
        lanczos_eigenpairs(g, k)?
    };
    pairs.sort_by(|a, b| {
        b.0.abs()
            .partial_cmp(&a.0.abs())
            .expect("finite eigenvalues")
            .then_with(|| b.0.partial_cmp(&a.0).expect("finite eigenvalues"))
    });
    pairs.truncate(k);
    for (_, v) in &mut pairs {
        fix_sign(v);
    }
    Ok(pairs)
}

fn adjacency_matvec(g: &Graph, x: &[f64], out: &mut [f64]) {
    for u in 0..g.node_count() {
        out[u] = g.adj_idx(u).iter().map(|&w| x[w]).sum();
    }
}

/// Largest-magnitude entry positive; ties resolved toward the lowest index.
fn fix_sign(v: &mut [f64]) {
    let mut best = 0usize;
    for (i, &x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

fn dense_eigenpairs(g: &Graph) -> Vec<(f64, Vec<f64>)> {
    let n = g.node_count();
    let mut a = vec![vec![0.0f64; n]; n];
    for &(i, j) in g.edges_idx() {
        a[i][j] = 1.0;
        a[j][i] = 1.0;
    }
    let (values, vectors) = jacobi_eigen(&mut a);
    (0..n).map(|t| (values[t], vectors[t].clone())).collect()
}

/// Cyclic Jacobi eigendecomposition of a dense symmetric matrix.
/// Returns eigenvalues and row-wise eigenvectors.
pub(crate) fn jacobi_eigen(a: &mut [Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v = vec![vec![0.0f64; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    if n <= 1 {
        return (a.iter().map(|r| r.first().copied().unwrap_or(0.0)).collect(), v);
    }

    let scale: f64 = a
        .iter()
        .flat_map(|r| r.iter())
        .map(|x| x.abs())
        .fold(0.0, f64::max)
        .max(1.0);

    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p][q] * a[p][q];
            }
        }
        if off.sqrt() <= 1e-13 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for i in 0..n {
                    let aip = a[i][p];
                    let aiq = a[i][q];
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for i in 0..n {
                    let api = a[p][i];
                    let aqi = a[q][i];
                    a[p][i] = c * api - s * aqi;
                    a[q][i] = s * api + c * aqi;
                }
                for i in 0..n {
                    let vip = v[i][p];
                    let viq = v[i][q];
                    v[i][p] = c * vip - s * viq;
                    v[i][q] = s * vip + c * viq;
                }
            }
        }
    }

    let values: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    let vectors: Vec<Vec<f64>> = (0..n).map(|j| (0..n).map(|i| v[i][j]).collect()).collect();
    (values, vectors)
}

/// Lanczos with full reorthogonalization. The basis restarts with a fresh
/// random direction whenever the Krylov space is exhausted, which keeps
/// multiplicity and disconnected components reachable.
fn lanczos_eigenpairs(g: &Graph, k: usize) -> Result<Vec<(f64, Vec<f64>)>> {
    let n = g.node_count();
    let norm_bound = (0..n).map(|u| g.degree_idx(u)).max().unwrap_or(1) as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(LANCZOS_SEED);
    let mut matvecs = 0usize;
    let mut m = (2 * k + 20).min(n);

    loop {
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m);
        let mut alphas: Vec<f64> = Vec::with_capacity(m);
        let mut betas: Vec<f64> = Vec::with_capacity(m); // beta[j] couples v_j and v_{j+1}

        let mut v = random_orthonormal(&mut rng, &basis, n);
        let mut beta_prev = 0.0;
        let mut prev: Option<Vec<f64>> = None;

        while basis.len() < m {
            basis.push(v.clone());
            let mut w = vec![0.0; n];
            adjacency_matvec(g, &v, &mut w);
            matvecs += 1;
            if matvecs > MAX_ITERATIONS {
                return Err(Error::EigenNonConvergence { iterations: matvecs });
            }
            let alpha = dot(&v, &w);
            alphas.push(alpha);
            for (wi, vi) in w.iter_mut().zip(&v) {
                *wi -= alpha * vi;
            }
            if let Some(p) = &prev {
                for (wi, pi) in w.iter_mut().zip(p) {
                    *wi -= beta_prev * pi;
                }
            }
            // Full reorthogonalization, twice for numerical safety.
            for _ in 0..2 {
                for b in &basis {
                    let c = dot(b, &w);
                    for (wi, bi) in w.iter_mut().zip(b) {
                        *wi -= c * bi;
                    }
                }
            }
            let beta = norm(&w);
            if basis.len() == m {
                break;
            }
            if beta <= 1e-12 * norm_bound.max(1.0) {
                // Invariant subspace exhausted; restart orthogonally.
                betas.push(0.0);
                v = random_orthonormal(&mut rng, &basis, n);
                prev = None;
                beta_prev = 0.0;
            } else {
                betas.push(beta);
                for wi in w.iter_mut() {
                    *wi /= beta;
                }
                prev = Some(v);
                v = w;
                beta_prev = beta;
            }
        }

        // Rayleigh-Ritz on the (block-)tridiagonal projection.
        let mm = basis.len();
        let mut t = vec![vec![0.0f64; mm]; mm];
        for i in 0..mm {
            t[i][i] = alphas[i];
            if i + 1 < mm {
                t[i][i + 1] = betas[i];
                t[i + 1][i] = betas[i];
            }
        }
        let (tvals, tvecs) = jacobi_eigen(&mut t);

        let mut order: Vec<usize> = (0..mm).collect();
        order.sort_by(|&x, &y| {
            tvals[y]
                .abs()
                .partial_cmp(&tvals[x].abs())
                .expect("finite")
                .then_with(|| tvals[y].partial_cmp(&tvals[x]).expect("finite"))
        });

        let mut pairs = Vec::with_capacity(k);
        let mut all_converged = true;
        for &idx in order.iter().take(k) {
            let lambda = tvals[idx];
            let mut y = vec![0.0; n];
            for (j, b) in basis.iter().enumerate() {
                let c = tvecs[idx][j];
                for (yi, bi) in y.iter_mut().zip(b) {
                    *yi += c * bi;
                }
            }
            let ny = norm(&y);
            if ny > 0.0 {
                for yi in y.iter_mut() {
                    *yi /= ny;
                }
            }
            let mut ay = vec![0.0; n];
            adjacency_matvec(g, &y, &mut ay);
            matvecs += 1;
            let res: f64 = ay
                .iter()
                .zip(&y)
                .map(|(a, b)| (a - lambda * b) * (a - lambda * b))
                .sum::<f64>()
                .sqrt();
            if res > EIGEN_TOLERANCE * norm_bound.max(1.0) {
                all_converged = false;
            }
            pairs.push((lambda, y));
        }

        if all_converged || mm == n {
            return Ok(pairs);
        }
        if matvecs > MAX_ITERATIONS {
            return Err(Error::EigenNonConvergence { iterations: matvecs });
        }
        m = (m * 2).min(n);
    }
}

fn random_orthonormal(rng: &mut ChaCha8Rng, basis: &[Vec<f64>], n: usize) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
        for _ in 0..2 {
            for b in basis {
                let c = dot(b, &v);
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= c * bi;
                }
            }
        }
        let nv = norm(&v);
        if nv > 1e-8 {
            for vi in v.iter_mut() {
                *vi /= nv;
            }
            return v;
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
