use serde::{Deserialize, Serialize};

use super::split::stratified_split;
use crate::dataio::LabeledDataset;
use crate::error::Result;
use crate::featext::Standardizer;
use crate::models::{scale_gamma, Gamma, ModelBundle, ModelKind, ModelParams, SvmParams};

pub const SVM_C_GRID: [f64; 3] = [0.1, 1.0, 10.0];
/// Multiples of the scale heuristic's gamma.
pub const SVM_GAMMA_FACTORS: [f64; 3] = [0.1, 1.0, 10.0];
/// Share of the training rows held out to score each candidate.
pub const VALIDATION_FRACTION: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub c: f64,
    pub gamma: f64,
    pub validation_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmTuning {
    pub params: SvmParams,
    pub best: GridPoint,
    pub grid: Vec<GridPoint>,
}

/// Grid search over C and gamma on a stratified holdout of `train`.
///
/// Every candidate is fit on the remaining rows and scored by accuracy; the
/// first best point in grid order wins, so smaller C and gamma take ties.
/// Gamma is fixed to the winning value in the returned parameters.
pub fn tune_svm(train: &LabeledDataset, base: &SvmParams, seed: u64) -> Result<SvmTuning> {
    let split = stratified_split(train, VALIDATION_FRACTION, seed)?;
    let inner = train.subset(&split.train_rows);
    let valid = train.subset(&split.test_rows);
    let z = Standardizer::fit(inner.features())?.transform(inner.features())?;
    let reference = scale_gamma(&z);

    let mut grid = Vec::with_capacity(SVM_C_GRID.len() * SVM_GAMMA_FACTORS.len());
    for &c in &SVM_C_GRID {
        for &factor in &SVM_GAMMA_FACTORS {
            let gamma = factor * reference;
            let params = ModelParams {
                svm: SvmParams {
                    c,
                    gamma: Gamma::Value(gamma),
                    ..*base
                },
                ..Default::default()
            };
            let bundle = ModelBundle::fit(ModelKind::Svm, &inner, &params)?;
            let pred = bundle.predict(valid.features())?;
            let hits = pred.iter().zip(valid.labels()).filter(|(p, t)| p == t).count();
            grid.push(GridPoint {
                c,
                gamma,
                validation_accuracy: hits as f64 / valid.n_samples() as f64,
            });
        }
    }
    let best = *grid
        .iter()
        .reduce(|a, b| {
            if b.validation_accuracy > a.validation_accuracy {
                b
            } else {
                a
            }
        })
        .expect("grid is not empty");
    Ok(SvmTuning {
        params: SvmParams {
            c: best.c,
            gamma: Gamma::Value(best.gamma),
            ..*base
        },
        best,
        grid,
    })
}
