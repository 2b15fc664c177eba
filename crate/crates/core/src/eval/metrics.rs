use serde::{Deserialize, Serialize};

use crate::dataio::{ArtifactPayload, Emotion, N_CLASSES};
use crate::error::{Error, Result};

/// Rows are true classes, columns predicted classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub counts: [[usize; N_CLASSES]; N_CLASSES],
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> usize {
        (0..N_CLASSES).map(|i| self.counts[i][i]).sum()
    }

    /// Row sums.
    pub fn support(&self) -> [usize; N_CLASSES] {
        self.counts.map(|row| row.iter().sum())
    }

    pub fn accuracy(&self) -> Result<f64> {
        match self.total() {
            0 => Err(Error::EmptyEvaluation),
            t => Ok(self.trace() as f64 / t as f64),
        }
    }
}

pub fn confusion_matrix(y_true: &[usize], y_pred: &[usize]) -> Result<ConfusionMatrix> {
    if y_true.len() != y_pred.len() {
        return Err(Error::DimensionMismatch {
            expected: y_true.len(),
            found: y_pred.len(),
        });
    }
    let mut cm = ConfusionMatrix::default();
    for (&t, &p) in y_true.iter().zip(y_pred) {
        if t >= N_CLASSES {
            return Err(Error::LabelOutOfRange(t));
        }
        if p >= N_CLASSES {
            return Err(Error::LabelOutOfRange(p));
        }
        cm.counts[t][p] += 1;
    }
    Ok(cm)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub class: Emotion,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationMetrics {
    pub accuracy: f64,
    pub per_class: Vec<ClassMetrics>,
    pub macro_f1: f64,
    pub weighted_f1: f64,
    /// How many precision / recall / F1 values were 0/0 and set to 0.
    pub zero_division_count: usize,
}

fn ratio(num: f64, den: f64, undefined: &mut usize) -> f64 {
    if den == 0.0 {
        *undefined += 1;
        0.0
    } else {
        num / den
    }
}

pub fn classification_metrics(cm: &ConfusionMatrix) -> Result<ClassificationMetrics> {
    let total = cm.total();
    let accuracy = cm.accuracy()?;
    let support = cm.support();
    let mut undefined = 0;
    let per_class: Vec<ClassMetrics> = (0..N_CLASSES)
        .map(|c| {
            let tp = cm.counts[c][c] as f64;
            let predicted: usize = (0..N_CLASSES).map(|r| cm.counts[r][c]).sum();
            let precision = ratio(tp, predicted as f64, &mut undefined);
            let recall = ratio(tp, support[c] as f64, &mut undefined);
            let f1 = ratio(2.0 * precision * recall, precision + recall, &mut undefined);
            ClassMetrics {
                class: Emotion::from_index(c).expect("three classes"),
                precision,
                recall,
                f1,
                support: support[c],
            }
        })
        .collect();
    let macro_f1 = per_class.iter().map(|m| m.f1).sum::<f64>() / N_CLASSES as f64;
    let weighted_f1 = if support.iter().all(|&s| s == support[0]) {
        // equal supports: identical to the macro average, computed the same way
        macro_f1
    } else {
        per_class.iter().map(|m| m.f1 * m.support as f64).sum::<f64>() / total as f64
    };
    Ok(ClassificationMetrics {
        accuracy,
        per_class,
        macro_f1,
        weighted_f1,
        zero_division_count: undefined,
    })
}

/// One model's confusion matrix as a standalone artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfusionReport {
    pub model: String,
    pub class_names: Vec<String>,
    pub counts: [[usize; N_CLASSES]; N_CLASSES],
    pub accuracy: f64,
}

impl ArtifactPayload for ConfusionReport {
    const KIND: &'static str = "confusion";
}

impl ConfusionReport {
    pub fn new(model: impl Into<String>, cm: &ConfusionMatrix) -> Result<Self> {
        Ok(Self {
            model: model.into(),
            class_names: Emotion::ALL.iter().map(|e| e.name().to_string()).collect(),
            counts: cm.counts,
            accuracy: cm.accuracy()?,
        })
    }
}
