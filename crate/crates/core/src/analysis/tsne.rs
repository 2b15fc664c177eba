//! Exact (all-pairs) t-SNE producing 2-D coordinates for visualization.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataio::ArtifactPayload;
use crate::error::{Error, Result};
use crate::matrix::{squared_distance, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TsneParams {
    pub perplexity: f64,
    pub iterations: usize,
    pub learning_rate: f64,
    pub early_exaggeration: f64,
    pub exaggeration_iterations: usize,
    pub initial_momentum: f64,
    pub final_momentum: f64,
    pub momentum_switch_iteration: usize,
    /// Standard deviation of the Gaussian initial layout.
    pub init_std: f64,
    pub seed: u64,
}

impl Default for TsneParams {
    fn default() -> Self {
        Self {
            perplexity: 30.0,
            iterations: 1000,
            learning_rate: 200.0,
            early_exaggeration: 4.0,
            exaggeration_iterations: 100,
            initial_momentum: 0.5,
            final_momentum: 0.8,
            momentum_switch_iteration: 250,
            init_std: 1e-4,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Embedding2D {
    pub coordinates: Vec<[f64; 2]>,
    /// Class of each point, when the caller supplies labels.
    pub labels: Vec<usize>,
    pub perplexity: f64,
    /// KL(P || Q) right after early exaggeration ends.
    pub kl_after_exaggeration: f64,
    pub final_kl: f64,
    /// Largest per-row `|H - log2(perplexity)|`, in bits.
    pub max_entropy_error: f64,
}

impl ArtifactPayload for Embedding2D {
    const KIND: &'static str = "embedding";
}

/// Row-conditional Gaussian affinities with per-row bandwidth calibrated so each
/// row's Shannon entropy (bits) equals `log2(perplexity)`.
#[derive(Debug, Clone)]
pub struct ConditionalAffinities {
    /// `n x n`, zero diagonal, rows sum to one.
    pub rows: Vec<Vec<f64>>,
    /// Entropy of each row in bits.
    pub entropies: Vec<f64>,
    /// Precision (1 / 2 sigma^2) per row.
    pub betas: Vec<f64>,
}

const ENTROPY_TOL: f64 = 1e-6;
const MAX_SEARCH_STEPS: usize = 200;
const P_FLOOR: f64 = 1e-12;

fn check_feasible(n: usize, perplexity: f64) -> Result<()> {
    let limit = (n as f64 - 1.0) / 3.0;
    if n < 4 || !(perplexity > 0.0) || perplexity >= limit {
        return Err(Error::InfeasiblePerplexity {
            perplexity,
            n_samples: n,
            limit,
        });
    }
    Ok(())
}

fn squared_distances(x: &Matrix) -> Vec<Vec<f64>> {
    (0..x.rows())
        .into_par_iter()
        .map(|i| (0..x.rows()).map(|j| squared_distance(x.row(i), x.row(j))).collect())
        .collect()
}

/// Entropy in bits and normalized row for a given precision. Distances are
/// shifted by the row minimum, which leaves both unchanged.
fn row_at(dist: &[f64], i: usize, beta: f64, dmin: f64, out: &mut [f64]) -> f64 {
    let mut sum = 0.0;
    let mut weighted = 0.0;
    for (j, (&d, o)) in dist.iter().zip(out.iter_mut()).enumerate() {
        if j == i {
            *o = 0.0;
            continue;
        }
        let shifted = d - dmin;
        let p = (-beta * shifted).exp();
        *o = p;
        sum += p;
        weighted += shifted * p;
    }
    out.iter_mut().for_each(|p| *p /= sum);
    (sum.ln() + beta * weighted / sum) / std::f64::consts::LN_2
}

pub fn conditional_affinities(x: &Matrix, perplexity: f64) -> Result<ConditionalAffinities> {
    let n = x.rows();
    check_feasible(n, perplexity)?;
    let dist = squared_distances(x);
    let target = perplexity.log2();
    let results: Vec<(Vec<f64>, f64, f64)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let d = &dist[i];
            let dmin = d
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &v)| v)
                .fold(f64::INFINITY, f64::min);
            let mut row = vec![0.0; n];
            let (mut lo, mut hi) = (0.0_f64, f64::INFINITY);
            let mut beta = 1.0;
            let mut h = row_at(d, i, beta, dmin, &mut row);
            for _ in 0..MAX_SEARCH_STEPS {
                if (h - target).abs() < ENTROPY_TOL {
                    break;
                }
                if h > target {
                    lo = beta;
                    beta = if hi.is_finite() { 0.5 * (beta + hi) } else { beta * 2.0 };
                } else {
                    hi = beta;
                    beta = 0.5 * (beta + lo);
                }
                h = row_at(d, i, beta, dmin, &mut row);
            }
            (row, h, beta)
        })
        .collect();
    let mut rows = Vec::with_capacity(n);
    let mut entropies = Vec::with_capacity(n);
    let mut betas = Vec::with_capacity(n);
    for (r, h, b) in results {
        rows.push(r);
        entropies.push(h);
        betas.push(b);
    }
    Ok(ConditionalAffinities { rows, entropies, betas })
}

/// Symmetrized joint affinities `(p_j|i + p_i|j) / 2n`, floored at a tiny
/// epsilon off the diagonal and renormalized to total mass one.
pub fn joint_affinities(cond: &ConditionalAffinities) -> Vec<Vec<f64>> {
    let n = cond.rows.len();
    let mut p = vec![vec![0.0; n]; n];
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let v = ((cond.rows[i][j] + cond.rows[j][i]) / (2.0 * n as f64)).max(P_FLOOR);
                p[i][j] = v;
                total += v;
            }
        }
    }
    p.iter_mut().flatten().for_each(|v| *v /= total);
    p
}

/// Student-t kernel values `1 / (1 + |y_i - y_j|^2)` and their off-diagonal sum.
fn low_dim_kernel(y: &[[f64; 2]]) -> (Vec<Vec<f64>>, f64) {
    let n = y.len();
    let num: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        0.0
                    } else {
                        let dx = y[i][0] - y[j][0];
                        let dy = y[i][1] - y[j][1];
                        1.0 / (1.0 + dx * dx + dy * dy)
                    }
                })
                .collect()
        })
        .collect();
    let sum = num.iter().map(|r| r.iter().sum::<f64>()).sum();
    (num, sum)
}

pub fn kl_divergence(p: &[Vec<f64>], y: &[[f64; 2]]) -> f64 {
    let (num, sum) = low_dim_kernel(y);
    let mut kl = 0.0;
    for i in 0..p.len() {
        for j in 0..p.len() {
            if i != j && p[i][j] > 0.0 {
                let q = (num[i][j] / sum).max(1e-300);
                kl += p[i][j] * (p[i][j] / q).ln();
            }
        }
    }
    kl.max(0.0)
}

/// Embed the rows of `features` (already standardized by the caller) in 2-D.
pub fn tsne_embed(features: &Matrix, params: &TsneParams) -> Result<Embedding2D> {
    if params.iterations == 0 || !(params.learning_rate > 0.0) {
        return Err(Error::InvalidParameter(
            "t-SNE needs at least one iteration and a positive learning rate".into(),
        ));
    }
    let n = features.rows();
    check_feasible(n, params.perplexity)?;
    let cond = conditional_affinities(features, params.perplexity)?;
    let target = params.perplexity.log2();
    let max_entropy_error = cond.entropies.iter().map(|h| (h - target).abs()).fold(0.0, f64::max);
    let p = joint_affinities(&cond);

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let normal = Normal::new(0.0, params.init_std).map_err(|e| Error::InvalidParameter(format!("init_std: {e}")))?;
    let mut y: Vec<[f64; 2]> = (0..n)
        .map(|_| [normal.sample(&mut rng), normal.sample(&mut rng)])
        .collect();
    let mut velocity = vec![[0.0; 2]; n];
    let mut gains = vec![[1.0f64; 2]; n];
    let exag_end = params.exaggeration_iterations.min(params.iterations);
    let mut kl_after_exaggeration = if exag_end == 0 {
        Some(kl_divergence(&p, &y))
    } else {
        None
    };

    for iter in 0..params.iterations {
        let exaggeration = if iter < exag_end {
            params.early_exaggeration
        } else {
            1.0
        };
        let momentum = if iter < params.momentum_switch_iteration {
            params.initial_momentum
        } else {
            params.final_momentum
        };
        let (num, sum) = low_dim_kernel(&y);
        let grad: Vec<[f64; 2]> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut g = [0.0; 2];
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let w = (exaggeration * p[i][j] - num[i][j] / sum) * num[i][j];
                    g[0] += 4.0 * w * (y[i][0] - y[j][0]);
                    g[1] += 4.0 * w * (y[i][1] - y[j][1]);
                }
                g
            })
            .collect();
        for i in 0..n {
            for d in 0..2 {
                let same_sign = (grad[i][d] > 0.0) == (velocity[i][d] > 0.0);
                gains[i][d] = if same_sign {
                    gains[i][d] * 0.8
                } else {
                    gains[i][d] + 0.2
                };
                gains[i][d] = gains[i][d].max(0.01);
                velocity[i][d] = momentum * velocity[i][d] - params.learning_rate * gains[i][d] * grad[i][d];
                y[i][d] += velocity[i][d];
            }
        }
        let mean = y.iter().fold([0.0; 2], |acc, v| [acc[0] + v[0], acc[1] + v[1]]);
        for v in y.iter_mut() {
            v[0] -= mean[0] / n as f64;
            v[1] -= mean[1] / n as f64;
        }
        if iter + 1 == exag_end {
            kl_after_exaggeration = Some(kl_divergence(&p, &y));
        }
    }
    let final_kl = kl_divergence(&p, &y);
    if y.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(
            "t-SNE diverged; lower the learning rate".into(),
        ));
    }
    Ok(Embedding2D {
        coordinates: y,
        labels: Vec::new(),
        perplexity: params.perplexity,
        kl_after_exaggeration: kl_after_exaggeration.unwrap_or(final_kl),
        final_kl,
        max_entropy_error,
    })
}
