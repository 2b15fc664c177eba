//! RBF-kernel support vector machine: Platt's SMO for the binary dual, and a
//! one-vs-one ensemble for the three emotion classes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataio::{LabeledDataset, N_CLASSES};
use crate::error::{Error, Result};
use crate::matrix::{squared_distance, Matrix};

#[inline]
pub fn rbf_kernel(u: &[f64], v: &[f64], gamma: f64) -> f64 {
    (-gamma * squared_distance(u, v)).exp()
}

/// Kernel width choice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gamma {
    /// `1 / (n_features * mean per-feature variance)` of the training split.
    Scale,
    Value(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SvmParams {
    pub c: f64,
    pub gamma: Gamma,
    /// KKT tolerance.
    pub tol: f64,
    /// Cap on full sweeps over the training set.
    pub max_passes: usize,
}

impl Default for SvmParams {
    fn default() -> Self {
        Self {
            c: 1.0,
            gamma: Gamma::Scale,
            tol: 1e-3,
            max_passes: 10,
        }
    }
}

/// `1 / (n_features * mean of per-feature variances)`; falls back to
/// `1 / n_features` when every feature is constant.
pub fn scale_gamma(x: &Matrix) -> f64 {
    let p = x.cols().max(1) as f64;
    let n = x.rows() as f64;
    let mean_var = (0..x.cols())
        .map(|j| {
            let col = x.column(j);
            let m = col.iter().sum::<f64>() / n;
            col.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n
        })
        .sum::<f64>()
        / p;
    if mean_var > 0.0 {
        1.0 / (p * mean_var)
    } else {
        1.0 / p
    }
}

/// Binary RBF machine holding only its support vectors (alpha > 0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmBinaryModel {
    pub support_vectors: Vec<Vec<f64>>,
    /// +1 / -1 per support vector.
    pub labels: Vec<f64>,
    pub alphas: Vec<f64>,
    pub bias: f64,
    pub gamma: f64,
    pub c: f64,
}

impl SvmBinaryModel {
    /// `f(x) = sum_i alpha_i y_i K(x_i, x) + b`.
    pub fn decision(&self, x: &[f64]) -> f64 {
        self.support_vectors
            .iter()
            .zip(&self.labels)
            .zip(&self.alphas)
            .map(|((sv, y), a)| a * y * rbf_kernel(sv, x, self.gamma))
            .sum::<f64>()
            + self.bias
    }

    /// `sgn(f(x))` with `sgn(0) = +1`.
    pub fn predict_sign(&self, x: &[f64]) -> f64 {
        sign(self.decision(x))
    }

    pub fn n_features(&self) -> usize {
        self.support_vectors.first().map_or(0, Vec::len)
    }
}

#[inline]
pub fn sign(v: f64) -> f64 {
    if v < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// A trained binary machine together with what SMO did to get there.
#[derive(Debug, Clone)]
pub struct SmoFit {
    pub model: SvmBinaryModel,
    /// Multiplier for every training row (zeros included), in input order.
    pub alphas: Vec<f64>,
    /// Dual objective after each accepted pair update, starting from 0 at alpha = 0.
    pub dual_objective: Vec<f64>,
    pub full_passes: usize,
    /// The final full sweep found no update to make.
    pub converged: bool,
}

struct Smo<'a> {
    kernel: Vec<Vec<f64>>,
    y: &'a [f64],
    alpha: Vec<f64>,
    /// `f(x_i) - y_i` for every row.
    errors: Vec<f64>,
    b: f64,
    c: f64,
    tol: f64,
    dual: f64,
    history: Vec<f64>,
    cursor: usize,
}

const ALPHA_EPS: f64 = 1e-12;

impl Smo<'_> {
    fn n(&self) -> usize {
        self.y.len()
    }

    fn non_bound(&self, i: usize) -> bool {
        self.alpha[i] > 0.0 && self.alpha[i] < self.c
    }

    fn take_step(&mut self, i1: usize, i2: usize) -> bool {
        if i1 == i2 {
            return false;
        }
        let (a1, a2) = (self.alpha[i1], self.alpha[i2]);
        let (y1, y2) = (self.y[i1], self.y[i2]);
        let (e1, e2) = (self.errors[i1], self.errors[i2]);
        let s = y1 * y2;
        let c = self.c;
        let (lo, hi) = if y1 != y2 {
            ((a2 - a1).max(0.0), (c + a2 - a1).min(c))
        } else {
            ((a1 + a2 - c).max(0.0), (a1 + a2).min(c))
        };
        if hi - lo < ALPHA_EPS {
            return false;
        }
        let k11 = self.kernel[i1][i1];
        let k22 = self.kernel[i2][i2];
        let k12 = self.kernel[i1][i2];
        let eta = k11 + k22 - 2.0 * k12;

        // Change in the dual objective for a move of alpha_2 to `a2n` along the
        // constraint line, from the current state.
        let f1 = e1 + y1 - self.b; // sum_j alpha_j y_j K_1j
        let f2 = e2 + y2 - self.b;
        let gain = |a2n: f64| -> f64 {
            let d2 = a2n - a2;
            let d1 = -s * d2;
            d1 + d2
                - (y1 * d1 * f1 + y2 * d2 * f2)
                - 0.5 * (d1 * d1 * k11 + d2 * d2 * k22 + 2.0 * y1 * y2 * d1 * d2 * k12)
        };

        let a2_new = if eta > 0.0 {
            (a2 + y2 * (e1 - e2) / eta).clamp(lo, hi)
        } else {
            let (g_lo, g_hi) = (gain(lo), gain(hi));
            if g_lo > g_hi + ALPHA_EPS {
                lo
            } else if g_hi > g_lo + ALPHA_EPS {
                hi
            } else {
                a2
            }
        };
        if (a2_new - a2).abs() < ALPHA_EPS * (a2_new + a2 + ALPHA_EPS) {
            return false;
        }
        let delta = gain(a2_new);
        if delta < 0.0 {
            return false;
        }
        let mut a1_new = a1 + s * (a2 - a2_new);
        // absorb round-off at the box edges
        if a1_new.abs() < ALPHA_EPS * c {
            a1_new = 0.0;
        } else if (a1_new - c).abs() < ALPHA_EPS * c {
            a1_new = c;
        }

        let d1 = y1 * (a1_new - a1);
        let d2 = y2 * (a2_new - a2);
        let b1 = self.b - e1 - d1 * k11 - d2 * k12;
        let b2 = self.b - e2 - d1 * k12 - d2 * k22;
        let b_new = if a1_new > 0.0 && a1_new < c {
            b1
        } else if a2_new > 0.0 && a2_new < c {
            b2
        } else {
            0.5 * (b1 + b2)
        };
        let db = b_new - self.b;
        for k in 0..self.n() {
            self.errors[k] += d1 * self.kernel[i1][k] + d2 * self.kernel[i2][k] + db;
        }
        self.alpha[i1] = a1_new;
        self.alpha[i2] = a2_new;
        self.b = b_new;
        self.dual += delta;
        self.history.push(self.dual);
        true
    }

    fn violates_kkt(&self, i: usize) -> bool {
        let r = self.errors[i] * self.y[i];
        (r < -self.tol && self.alpha[i] < self.c) || (r > self.tol && self.alpha[i] > 0.0)
    }

    fn examine(&mut self, i2: usize) -> bool {
        if !self.violates_kkt(i2) {
            return false;
        }
        let n = self.n();
        let e2 = self.errors[i2];
        // second-choice heuristic: largest |E1 - E2| among non-bound rows
        let best = (0..n).filter(|&i| self.non_bound(i)).max_by(|&a, &b| {
            (self.errors[a] - e2)
                .abs()
                .total_cmp(&(self.errors[b] - e2).abs())
                .then(b.cmp(&a))
        });
        if let Some(i1) = best {
            if self.take_step(i1, i2) {
                return true;
            }
        }
        self.cursor = (self.cursor + 7919) % n;
        let start = self.cursor;
        for k in 0..n {
            let i1 = (start + k) % n;
            if self.non_bound(i1) && self.take_step(i1, i2) {
                return true;
            }
        }
        for k in 0..n {
            let i1 = (start + k) % n;
            if self.take_step(i1, i2) {
                return true;
            }
        }
        false
    }
}

fn kernel_matrix(x: &Matrix, gamma: f64) -> Vec<Vec<f64>> {
    (0..x.rows())
        .into_par_iter()
        .map(|i| (0..x.rows()).map(|j| rbf_kernel(x.row(i), x.row(j), gamma)).collect())
        .collect()
}

/// Solve the binary soft-margin dual with SMO. `y` holds +1 / -1.
pub fn train_svm_binary(x: &Matrix, y: &[f64], c: f64, gamma: f64, tol: f64, max_passes: usize) -> Result<SmoFit> {
    if x.rows() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.rows(),
            found: y.len(),
        });
    }
    if !(c > 0.0) || !(gamma > 0.0) || !(tol > 0.0) || max_passes == 0 {
        return Err(Error::InvalidParameter(
            "SVM needs C > 0, gamma > 0, tol > 0 and max_passes >= 1".into(),
        ));
    }
    if y.iter().any(|&v| v != 1.0 && v != -1.0) {
        return Err(Error::InvalidParameter("binary labels must be +1 or -1".into()));
    }
    if !(y.contains(&1.0) && y.contains(&-1.0)) {
        return Err(Error::SingleClass);
    }
    let n = y.len();
    let mut smo = Smo {
        kernel: kernel_matrix(x, gamma),
        y,
        alpha: vec![0.0; n],
        errors: y.iter().map(|v| -v).collect(),
        b: 0.0,
        c,
        tol,
        dual: 0.0,
        history: vec![0.0],
        cursor: 0,
    };

    let mut full_passes = 0;
    let mut examine_all = true;
    let mut converged = false;
    const MAX_NON_BOUND_SWEEPS: usize = 10_000;
    let mut non_bound_sweeps = 0;
    loop {
        let mut changed = 0;
        if examine_all {
            full_passes += 1;
            for i in 0..n {
                changed += usize::from(smo.examine(i));
            }
        } else {
            non_bound_sweeps += 1;
            for i in 0..n {
                if smo.non_bound(i) {
                    changed += usize::from(smo.examine(i));
                }
            }
        }
        if examine_all && changed == 0 {
            converged = true;
            break;
        }
        if examine_all {
            examine_all = false;
            non_bound_sweeps = 0;
        } else if changed == 0 || non_bound_sweeps >= MAX_NON_BOUND_SWEEPS {
            if full_passes >= max_passes {
                break;
            }
            examine_all = true;
        }
    }

    let support: Vec<usize> = (0..n).filter(|&i| smo.alpha[i] > 0.0).collect();
    let model = SvmBinaryModel {
        support_vectors: support.iter().map(|&i| x.row(i).to_vec()).collect(),
        labels: support.iter().map(|&i| y[i]).collect(),
        alphas: support.iter().map(|&i| smo.alpha[i]).collect(),
        bias: smo.b,
        gamma,
        c,
    };
    Ok(SmoFit {
        model,
        alphas: smo.alpha,
        dual_objective: smo.history,
        full_passes,
        converged,
    })
}

/// Binary machine for one class pair; `positive` wins when `f(x) >= 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseSvm {
    pub positive: usize,
    pub negative: usize,
    pub model: SvmBinaryModel,
}

/// One-vs-one ensemble over the pairs (0,1), (0,2), (1,2).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmEnsemble {
    pub pairs: Vec<PairwiseSvm>,
    pub gamma: f64,
    /// Whether every pairwise SMO run ended on a clean full sweep.
    pub converged: bool,
}

pub const CLASS_PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

pub fn train_svm(train: &LabeledDataset, params: &SvmParams) -> Result<SvmEnsemble> {
    let gamma = match params.gamma {
        Gamma::Scale => scale_gamma(train.features()),
        Gamma::Value(g) => g,
    };
    let fits: Vec<(PairwiseSvm, bool)> = CLASS_PAIRS
        .par_iter()
        .map(|&(pos, neg)| {
            let rows: Vec<usize> = train
                .labels()
                .iter()
                .enumerate()
                .filter(|(_, &l)| l == pos || l == neg)
                .map(|(i, _)| i)
                .collect();
            let x = train.features().select_rows(&rows);
            let y: Vec<f64> = rows
                .iter()
                .map(|&i| if train.labels()[i] == pos { 1.0 } else { -1.0 })
                .collect();
            let fit = train_svm_binary(&x, &y, params.c, gamma, params.tol, params.max_passes)?;
            Ok((
                PairwiseSvm {
                    positive: pos,
                    negative: neg,
                    model: fit.model,
                },
                fit.converged,
            ))
        })
        .collect::<Result<_>>()?;
    let converged = fits.iter().all(|f| f.1);
    Ok(SvmEnsemble {
        pairs: fits.into_iter().map(|f| f.0).collect(),
        gamma,
        converged,
    })
}

/// Majority vote over pairwise decisions `(positive, negative, f)`. A three-way
/// split goes to the winner of the largest-|f| vote, then the lowest class.
pub fn vote(decisions: &[(usize, usize, f64)]) -> usize {
    let mut votes = [0usize; N_CLASSES];
    let winners: Vec<(usize, f64)> = decisions
        .iter()
        .map(|&(pos, neg, f)| (if sign(f) > 0.0 { pos } else { neg }, f.abs()))
        .collect();
    for &(w, _) in &winners {
        votes[w] += 1;
    }
    let top = *votes.iter().max().unwrap_or(&0);
    let leaders: Vec<usize> = (0..N_CLASSES).filter(|&c| votes[c] == top).collect();
    if leaders.len() == 1 {
        return leaders[0];
    }
    let best_margin = winners
        .iter()
        .filter(|(w, _)| leaders.contains(w))
        .map(|w| w.1)
        .fold(f64::NEG_INFINITY, f64::max);
    winners
        .iter()
        .filter(|(w, m)| leaders.contains(w) && *m == best_margin)
        .map(|w| w.0)
        .min()
        .unwrap_or(leaders[0])
}

impl SvmEnsemble {
    pub fn n_features(&self) -> usize {
        self.pairs.first().map_or(0, |p| p.model.n_features())
    }

    pub fn predict(&self, features: &Matrix) -> Result<Vec<usize>> {
        let expected = self.n_features();
        if features.cols() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: features.cols(),
            });
        }
        Ok((0..features.rows())
            .into_par_iter()
            .map(|r| {
                let x = features.row(r);
                let decisions: Vec<(usize, usize, f64)> = self
                    .pairs
                    .iter()
                    .map(|p| (p.positive, p.negative, p.model.decision(x)))
                    .collect();
                vote(&decisions)
            })
            .collect())
    }
}

pub fn predict_svm(ensemble: &SvmEnsemble, features: &Matrix) -> Result<Vec<usize>> {
    ensemble.predict(features)
}
