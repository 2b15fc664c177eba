use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::dataio::{ArtifactPayload, EegRecording};
use crate::error::{Error, Result};

/// Welch estimator settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WelchConfig {
    /// Segment length in samples.
    pub segment_length: usize,
    pub overlap_fraction: f64,
}

impl Default for WelchConfig {
    /// One-second segments at 150 Hz, half overlap.
    fn default() -> Self {
        Self {
            segment_length: 150,
            overlap_fraction: 0.5,
        }
    }
}

/// One-sided power spectral density, one row per channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsdEstimate {
    pub channels: Vec<String>,
    pub frequencies_hz: Vec<f64>,
    /// `power[c][k]`: density (signal units squared per Hz) at `frequencies_hz[k]`.
    pub power: Vec<Vec<f64>>,
    pub sampling_rate: f64,
    pub segment_length: usize,
    pub overlap_fraction: f64,
}

impl ArtifactPayload for PsdEstimate {
    const KIND: &'static str = "psd";
}

impl PsdEstimate {
    pub fn resolution_hz(&self) -> f64 {
        self.sampling_rate / self.segment_length as f64
    }

    pub fn max_frequency(&self) -> f64 {
        *self.frequencies_hz.last().unwrap_or(&0.0)
    }

    /// Trapezoidal integral of each channel's density over the full grid.
    pub fn total_power(&self) -> Vec<f64> {
        self.power.iter().map(|p| trapezoid(&self.frequencies_hz, p)).collect()
    }
}

pub(crate) fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum()
}

/// Periodic Hann window.
fn hann(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / n as f64).cos())
        .collect()
}

/// Welch's averaged periodogram per channel: Hann-windowed segments, mean
/// averaging, density scaling so the integrated spectrum equals the mean square.
///
/// Each segment's mean is removed before windowing and its power is deposited
/// in the 0 Hz bin alone, so a constant signal has no window leakage into the
/// low bins. The DC density is scaled for the half-width the 0 Hz bin gets under
/// trapezoidal integration.
pub fn welch_psd(recording: &EegRecording, config: &WelchConfig) -> Result<PsdEstimate> {
    let seg = config.segment_length;
    let n = recording.n_samples();
    if seg < 8 {
        return Err(Error::InvalidParameter(format!(
            "segment length must be >= 8, got {seg}"
        )));
    }
    if !(0.0..1.0).contains(&config.overlap_fraction) {
        return Err(Error::InvalidParameter(format!(
            "overlap fraction must lie in [0, 1), got {}",
            config.overlap_fraction
        )));
    }
    if seg > n {
        return Err(Error::SignalTooShort { len: n, min: seg });
    }
    let fs = recording.sampling_rate();
    let step = (seg - (config.overlap_fraction * seg as f64).round() as usize).max(1);
    let n_bins = seg / 2 + 1;
    let df = fs / seg as f64;
    let window = hann(seg);
    let window_power: f64 = window.iter().map(|w| w * w).sum();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(seg);

    let power = recording
        .samples()
        .par_iter()
        .map(|x| {
            let mut acc = vec![0.0; n_bins];
            let mut buf = vec![Complex64::new(0.0, 0.0); seg];
            let mut n_segments = 0usize;
            let mut start = 0;
            while start + seg <= n {
                let segment = &x[start..start + seg];
                let mean = segment.iter().sum::<f64>() / seg as f64;
                for ((b, &v), &w) in buf.iter_mut().zip(segment).zip(&window) {
                    *b = Complex64::new((v - mean) * w, 0.0);
                }
                fft.process(&mut buf);
                for (k, a) in acc.iter_mut().enumerate() {
                    let mut p = buf[k].norm_sqr() / (fs * window_power);
                    if k != 0 && !(seg.is_multiple_of(2) && k == seg / 2) {
                        p *= 2.0;
                    }
                    *a += p;
                }
                acc[0] += 2.0 * mean * mean / df;
                n_segments += 1;
                start += step;
            }
            acc.iter_mut().for_each(|a| *a /= n_segments as f64);
            acc
        })
        .collect();

    Ok(PsdEstimate {
        channels: recording.channels().to_vec(),
        frequencies_hz: (0..n_bins).map(|k| k as f64 * df).collect(),
        power,
        sampling_rate: fs,
        segment_length: seg,
        overlap_fraction: config.overlap_fraction,
    })
}
