use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataio::ArtifactPayload;
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Pearson correlation between every pair of feature columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub feature_names: Vec<String>,
    /// Row-major `n_features x n_features`.
    pub values: Vec<Vec<f64>>,
    /// Columns with zero variance; their correlations are recorded as 0
    /// (including the diagonal).
    pub constant_columns: Vec<bool>,
}

impl ArtifactPayload for CorrelationMatrix {
    const KIND: &'static str = "correlation";
}

impl CorrelationMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i][j]
    }
}

pub fn correlation_matrix(features: &Matrix, feature_names: &[String]) -> Result<CorrelationMatrix> {
    let n = features.rows();
    if n < 2 {
        return Err(Error::EmptyInput(format!("correlation needs at least 2 rows, got {n}")));
    }
    if feature_names.len() != features.cols() {
        return Err(Error::DimensionMismatch {
            expected: features.cols(),
            found: feature_names.len(),
        });
    }
    let p = features.cols();
    // centred, unit-norm columns
    let columns: Vec<(Vec<f64>, bool)> = (0..p)
        .into_par_iter()
        .map(|j| {
            let col = features.column(j);
            let mean = col.iter().sum::<f64>() / n as f64;
            let mut centred: Vec<f64> = col.iter().map(|v| v - mean).collect();
            let norm = centred.iter().map(|v| v * v).sum::<f64>().sqrt();
            let constant = !(norm > 1e-12 * mean.abs().max(1.0) * (n as f64).sqrt());
            if constant {
                centred.iter_mut().for_each(|v| *v = 0.0);
            } else {
                centred.iter_mut().for_each(|v| *v /= norm);
            }
            (centred, constant)
        })
        .collect();

    let mut values: Vec<Vec<f64>> = (0..p)
        .into_par_iter()
        .map(|i| {
            (0..p)
                .map(|j| {
                    if j < i {
                        return 0.0; // filled from the upper triangle below
                    }
                    if columns[i].1 || columns[j].1 {
                        0.0
                    } else if i == j {
                        1.0
                    } else {
                        let r: f64 = columns[i].0.iter().zip(&columns[j].0).map(|(a, b)| a * b).sum();
                        r.clamp(-1.0, 1.0)
                    }
                })
                .collect()
        })
        .collect();
    for i in 0..p {
        for j in 0..i {
            values[i][j] = values[j][i];
        }
    }
    Ok(CorrelationMatrix {
        feature_names: feature_names.to_vec(),
        values,
        constant_columns: columns.iter().map(|c| c.1).collect(),
    })
}
