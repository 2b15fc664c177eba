use rayon::prelude::*;

use super::windows::{sliding_windows, WindowPlan, WindowSegment};
use crate::dataio::{EegRecording, Emotion, LabeledDataset};
use crate::dsp::{band_power, welch_psd, Band, BandDefinition, WelchConfig};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

pub const STATISTICS: [&str; 7] = ["mean", "std", "min", "max", "range", "skewness", "kurtosis"];

/// Features emitted per channel: the seven statistics plus five band powers.
pub const FEATURES_PER_CHANNEL: usize = STATISTICS.len() + Band::ALL.len();

const MIN_WINDOW_SAMPLES: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub names: Vec<String>,
    pub values: Vec<f64>,
}

/// Mean, sample std, min, max, range, skewness, excess kurtosis.
///
/// Skewness and kurtosis use population central moments; both are 0 for a
/// constant signal.
pub fn descriptive_statistics(x: &[f64]) -> [f64; 7] {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &v in x {
        let d = v - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    let sample_var = if x.len() > 1 { m2 / (n - 1.0) } else { 0.0 };
    let (m2, m3, m4) = (m2 / n, m3 / n, m4 / n);
    let min = x.iter().copied().fold(f64::INFINITY, f64::min);
    let max = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // relative floor keeps round-off in near-constant windows from exploding
    let degenerate = m2 <= 1e-24 * (mean * mean).max(1e-300);
    let (skew, kurt) = if degenerate {
        (0.0, 0.0)
    } else {
        (m3 / m2.powf(1.5), m4 / (m2 * m2) - 3.0)
    };
    [mean, sample_var.sqrt(), min, max, max - min, skew, kurt]
}

/// Statistics and band powers for every channel of one window. Names are
/// `<channel>_<statistic>` and `<channel>_power_<band>`.
pub fn window_features(window: &EegRecording, welch: &WelchConfig) -> Result<FeatureVector> {
    let n = window.n_samples();
    if n < MIN_WINDOW_SAMPLES {
        return Err(Error::SignalTooShort {
            len: n,
            min: MIN_WINDOW_SAMPLES,
        });
    }
    let cfg = WelchConfig {
        segment_length: welch.segment_length.min(n),
        overlap_fraction: welch.overlap_fraction,
    };
    let psd = welch_psd(window, &cfg)?;
    let bands: Vec<Vec<f64>> = BandDefinition::standard()
        .iter()
        .map(|b| band_power(&psd, b))
        .collect::<Result<_>>()?;

    let mut names = Vec::with_capacity(window.n_channels() * FEATURES_PER_CHANNEL);
    let mut values = Vec::with_capacity(names.capacity());
    for (c, channel) in window.channels().iter().enumerate() {
        let stats = descriptive_statistics(window.channel(c));
        for (stat, v) in STATISTICS.iter().zip(stats) {
            names.push(format!("{channel}_{stat}"));
            values.push(v);
        }
        for (band, powers) in Band::ALL.iter().zip(&bands) {
            names.push(format!("{channel}_power_{}", band.name()));
            values.push(powers[c]);
        }
    }
    Ok(FeatureVector { names, values })
}

/// Window a labelled recording and featurize every window. Rows follow
/// [`sliding_windows`] order regardless of how the work is scheduled.
pub fn featurize_recording(
    recording: &EegRecording,
    label: Emotion,
    plan: &WindowPlan,
    welch: &WelchConfig,
) -> Result<LabeledDataset> {
    let windows = sliding_windows(recording, plan)?;
    let vectors: Vec<FeatureVector> = windows
        .par_iter()
        .map(|w: &WindowSegment| window_features(&w.data, welch))
        .collect::<Result<_>>()?;
    let names = vectors[0].names.clone();
    let rows: Vec<Vec<f64>> = vectors.into_iter().map(|v| v.values).collect();
    let labels = vec![label.index(); rows.len()];
    LabeledDataset::new(Matrix::from_rows(&rows)?, names, labels)
}

/// Row-wise concatenation of datasets that share a feature layout.
pub fn concat_datasets(parts: &[LabeledDataset]) -> Result<LabeledDataset> {
    let first = parts
        .first()
        .ok_or_else(|| Error::EmptyInput("no datasets to concatenate".into()))?;
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for p in parts {
        if p.feature_names() != first.feature_names() {
            return Err(Error::InvalidParameter(
                "datasets have different feature layouts".into(),
            ));
        }
        rows.extend(p.features().iter_rows().map(<[f64]>::to_vec));
        labels.extend_from_slice(p.labels());
    }
    LabeledDataset::new(Matrix::from_rows(&rows)?, first.feature_names().to_vec(), labels)
}
