//! Multinomial (softmax) logistic regression with an L2 penalty, trained by
//! full-batch gradient descent.

use serde::{Deserialize, Serialize};

use crate::dataio::{LabeledDataset, N_CLASSES};
use crate::error::{Error, Result};
use crate::matrix::{dot, Matrix};

/// Logistic function `1 / (1 + e^-x)`, evaluated without overflow for any finite x.
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LogRegParams {
    pub l2_lambda: f64,
    pub learning_rate: f64,
    pub max_epochs: usize,
    /// Stop once the largest absolute gradient component falls below this.
    pub tolerance: f64,
}

impl Default for LogRegParams {
    fn default() -> Self {
        Self {
            l2_lambda: 1e-3,
            learning_rate: 0.1,
            max_epochs: 500,
            tolerance: 1e-5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRegModel {
    /// `n_classes` rows of `n_features` weights.
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<f64>,
    pub l2_lambda: f64,
    /// Objective value after each accepted epoch.
    pub training_history: Vec<f64>,
}

/// Parameters laid out as the model stores them; gradients share the layout.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftmaxParameters {
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<f64>,
}

impl SoftmaxParameters {
    pub fn zeros(n_features: usize) -> Self {
        Self {
            weights: vec![vec![0.0; n_features]; N_CLASSES],
            biases: vec![0.0; N_CLASSES],
        }
    }

    fn max_abs(&self) -> f64 {
        self.weights
            .iter()
            .flatten()
            .chain(&self.biases)
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Numerically stable softmax over class scores.
fn softmax(scores: &[f64; N_CLASSES]) -> [f64; N_CLASSES] {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut out = scores.map(|s| (s - max).exp());
    let sum: f64 = out.iter().sum();
    out.iter_mut().for_each(|p| *p /= sum);
    out
}

fn scores(weights: &[Vec<f64>], biases: &[f64], x: &[f64]) -> [f64; N_CLASSES] {
    let mut s = [0.0; N_CLASSES];
    for (c, sc) in s.iter_mut().enumerate() {
        *sc = biases[c] + dot(&weights[c], x);
    }
    s
}

/// Mean cross-entropy plus `(lambda / 2) * ||W||^2` (biases unpenalized), and
/// its gradient.
pub fn loss_and_gradient(
    params: &SoftmaxParameters,
    x: &Matrix,
    labels: &[usize],
    l2_lambda: f64,
) -> (f64, SoftmaxParameters) {
    let n = x.rows() as f64;
    let mut grad = SoftmaxParameters::zeros(x.cols());
    let mut loss = 0.0;
    for (row, &y) in x.iter_rows().zip(labels) {
        let s = scores(&params.weights, &params.biases, row);
        let max = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let log_sum = max + s.iter().map(|v| (v - max).exp()).sum::<f64>().ln();
        loss += log_sum - s[y];
        let p = softmax(&s);
        for c in 0..N_CLASSES {
            let delta = p[c] - if c == y { 1.0 } else { 0.0 };
            grad.biases[c] += delta;
            for (g, v) in grad.weights[c].iter_mut().zip(row) {
                *g += delta * v;
            }
        }
    }
    loss /= n;
    let mut penalty = 0.0;
    for c in 0..N_CLASSES {
        grad.biases[c] /= n;
        for (g, w) in grad.weights[c].iter_mut().zip(&params.weights[c]) {
            *g = *g / n + l2_lambda * w;
            penalty += w * w;
        }
    }
    (loss + 0.5 * l2_lambda * penalty, grad)
}

fn objective(params: &SoftmaxParameters, x: &Matrix, labels: &[usize], l2: f64) -> f64 {
    loss_and_gradient(params, x, labels, l2).0
}

/// Gradient descent from zero weights. A step that would raise the objective is
/// retried with half the step size, so the recorded history never increases.
pub fn train_logreg(train: &LabeledDataset, params: &LogRegParams) -> Result<LogRegModel> {
    if !(params.l2_lambda >= 0.0) || !(params.learning_rate > 0.0) {
        return Err(Error::InvalidParameter(
            "logistic regression needs lambda >= 0 and a positive learning rate".into(),
        ));
    }
    let counts = train.class_counts();
    if let Some(class) = counts.iter().position(|&c| c == 0) {
        return Err(Error::ClassTooSmall {
            class,
            count: 0,
            required: 1,
        });
    }
    let x = train.features();
    let labels = train.labels();
    let mut theta = SoftmaxParameters::zeros(x.cols());
    let (mut loss, mut grad) = loss_and_gradient(&theta, x, labels, params.l2_lambda);
    let mut history = vec![loss];
    let mut step = params.learning_rate;

    for epoch in 0..params.max_epochs {
        if !loss.is_finite() {
            return Err(Error::NonFiniteLoss(epoch));
        }
        if grad.max_abs() < params.tolerance {
            break;
        }
        let mut accepted = false;
        for _ in 0..60 {
            let mut cand = theta.clone();
            for c in 0..N_CLASSES {
                cand.biases[c] -= step * grad.biases[c];
                for (w, g) in cand.weights[c].iter_mut().zip(&grad.weights[c]) {
                    *w -= step * g;
                }
            }
            let cand_loss = objective(&cand, x, labels, params.l2_lambda);
            if !cand_loss.is_finite() {
                return Err(Error::NonFiniteLoss(epoch + 1));
            }
            if cand_loss <= loss {
                theta = cand;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
        let (l, g) = loss_and_gradient(&theta, x, labels, params.l2_lambda);
        loss = l;
        grad = g;
        history.push(loss);
        // allow the step to recover after a backtrack
        step = (step * 2.0).min(params.learning_rate);
    }

    Ok(LogRegModel {
        weights: theta.weights,
        biases: theta.biases,
        l2_lambda: params.l2_lambda,
        training_history: history,
    })
}

impl LogRegModel {
    pub fn n_features(&self) -> usize {
        self.weights.first().map_or(0, Vec::len)
    }

    pub fn predict_proba(&self, features: &Matrix) -> Result<Vec<[f64; N_CLASSES]>> {
        if features.cols() != self.n_features() {
            return Err(Error::DimensionMismatch {
                expected: self.n_features(),
                found: features.cols(),
            });
        }
        Ok(features
            .iter_rows()
            .map(|row| softmax(&scores(&self.weights, &self.biases, row)))
            .collect())
    }

    /// Argmax of class probabilities; exact ties go to the lowest class index.
    pub fn predict(&self, features: &Matrix) -> Result<Vec<usize>> {
        Ok(self.predict_proba(features)?.iter().map(argmax).collect())
    }
}

fn argmax(p: &[f64; N_CLASSES]) -> usize {
    let mut best = 0;
    for c in 1..N_CLASSES {
        if p[c] > p[best] {
            best = c;
        }
    }
    best
}

pub fn predict_logreg(model: &LogRegModel, features: &Matrix) -> Result<Vec<usize>> {
    model.predict(features)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataio::{generate_synthetic, SyntheticSpec};

    #[test]
    fn sigmoid_values() {
        assert_eq!(sigmoid(0.0), 0.5);
        // 1 / (1 + e^-2) evaluated by hand: e^-2 = 0.1353352832...
        assert!((sigmoid(2.0) - 0.880797).abs() < 1e-6);
        assert!(sigmoid(700.0).is_finite() && sigmoid(-700.0).is_finite());
        assert_eq!(sigmoid(800.0), 1.0);
        assert!(sigmoid(-800.0) >= 0.0);
        for i in -300..=300 {
            let x = i as f64 / 10.0;
            assert!((sigmoid(x) + sigmoid(-x) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_model_is_uniform_and_picks_class_zero() {
        let model = LogRegModel {
            weights: vec![vec![0.0; 2]; 3],
            biases: vec![0.0; 3],
            l2_lambda: 0.0,
            training_history: vec![],
        };
        let x = Matrix::from_rows(&[[1.0, -4.0], [0.0, 3.0]]).unwrap();
        for p in model.predict_proba(&x).unwrap() {
            for v in p {
                assert!((v - 1.0 / 3.0).abs() < 1e-15);
            }
        }
        assert_eq!(model.predict(&x).unwrap(), vec![0, 0]);
    }

    #[test]
    fn heavy_penalty_shrinks_weights() {
        let ds = generate_synthetic(&SyntheticSpec::new(30, 2, 10.0, 3)).unwrap();
        let params = LogRegParams {
            l2_lambda: 1e6,
            ..Default::default()
        };
        let m = train_logreg(&ds, &params).unwrap();
        let norm: f64 = m.weights.iter().flatten().map(|w| w * w).sum::<f64>().sqrt();
        assert!(norm < 1e-3, "norm {norm}");
        for p in m.predict_proba(ds.features()).unwrap() {
            for v in p {
                assert!((v - 1.0 / 3.0).abs() < 1e-2);
            }
        }
    }

    #[test]
    fn history_never_increases() {
        let ds = generate_synthetic(&SyntheticSpec::new(20, 3, 2.0, 11)).unwrap();
        let params = LogRegParams {
            learning_rate: 50.0,
            ..Default::default()
        };
        let m = train_logreg(&ds, &params).unwrap();
        for w in m.training_history.windows(2) {
            assert!(w[1] <= w[0]);
        }
    }

    #[test]
    fn dimension_mismatch() {
        let ds = generate_synthetic(&SyntheticSpec::new(5, 2, 1.0, 1)).unwrap();
        let m = train_logreg(&ds, &LogRegParams::default()).unwrap();
        assert!(m.predict(&Matrix::zeros(1, 3)).is_err());
    }

    #[test]
    fn missing_class_rejected() {
        let ds = generate_synthetic(&SyntheticSpec::new(5, 2, 1.0, 1)).unwrap();
        let two_classes = ds.subset(&(0..10).collect::<Vec<_>>());
        assert!(train_logreg(&two_classes, &LogRegParams::default()).is_err());
    }
}
