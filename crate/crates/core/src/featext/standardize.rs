use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Per-feature z-scoring fitted on training rows only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub means: Vec<f64>,
    /// Sample standard deviations; 1.0 for constant features.
    pub std_devs: Vec<f64>,
    /// `true` where the training column was constant and is only centred.
    pub constant: Vec<bool>,
}

impl Standardizer {
    pub fn fit(train: &Matrix) -> Result<Self> {
        let n = train.rows();
        if n == 0 || train.cols() == 0 {
            return Err(Error::EmptyInput("cannot fit a standardizer on an empty matrix".into()));
        }
        let mut means = vec![0.0; train.cols()];
        for row in train.iter_rows() {
            for (m, v) in means.iter_mut().zip(row) {
                *m += v;
            }
        }
        means.iter_mut().for_each(|m| *m /= n as f64);
        let mut ss = vec![0.0; train.cols()];
        for row in train.iter_rows() {
            for ((s, v), m) in ss.iter_mut().zip(row).zip(&means) {
                *s += (v - m) * (v - m);
            }
        }
        let mut std_devs = Vec::with_capacity(train.cols());
        let mut constant = Vec::with_capacity(train.cols());
        for (s, m) in ss.iter().zip(&means) {
            let sd = if n > 1 { (s / (n as f64 - 1.0)).sqrt() } else { 0.0 };
            let is_const = !(sd > 1e-12 * m.abs().max(1.0));
            constant.push(is_const);
            std_devs.push(if is_const { 1.0 } else { sd });
        }
        Ok(Self {
            means,
            std_devs,
            constant,
        })
    }

    pub fn transform(&self, features: &Matrix) -> Result<Matrix> {
        if features.cols() != self.means.len() {
            return Err(Error::DimensionMismatch {
                expected: self.means.len(),
                found: features.cols(),
            });
        }
        let mut out = features.clone();
        for r in 0..out.rows() {
            for ((v, m), s) in out.row_mut(r).iter_mut().zip(&self.means).zip(&self.std_devs) {
                *v = (*v - m) / s;
            }
        }
        Ok(out)
    }
}

pub fn fit_standardizer(train: &Matrix) -> Result<Standardizer> {
    Standardizer::fit(train)
}

pub fn apply_standardizer(s: &Standardizer, features: &Matrix) -> Result<Matrix> {
    s.transform(features)
}
