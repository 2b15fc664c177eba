use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::butterworth::SosFilter;
use crate::dataio::EegRecording;
use crate::error::{Error, Result};

/// Zero-phase Butterworth band-pass settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FilterSpec {
    pub low_hz: f64,
    pub high_hz: f64,
    /// Prototype order; the band-pass has twice as many poles.
    pub order: usize,
}

impl Default for FilterSpec {
    fn default() -> Self {
        Self {
            low_hz: 0.5,
            high_hz: 45.0,
            order: 4,
        }
    }
}

impl FilterSpec {
    /// Samples at each end of a filtered signal treated as startup transient.
    pub fn transient_samples(&self) -> usize {
        3 * self.order
    }

    pub fn design(&self, sampling_rate: f64) -> Result<SosFilter> {
        SosFilter::bandpass(self.order, self.low_hz, self.high_hz, sampling_rate)
    }
}

/// Apply the band-pass forward then backward to every channel.
pub fn bandpass_filter(recording: &EegRecording, spec: &FilterSpec) -> Result<EegRecording> {
    let sos = spec.design(recording.sampling_rate())?;
    let min = 3 * spec.order;
    if recording.n_samples() <= min {
        return Err(Error::SignalTooShort {
            len: recording.n_samples(),
            min,
        });
    }
    let filtered: Vec<Vec<f64>> = recording.samples().par_iter().map(|ch| sos.filtfilt(ch)).collect();
    Ok(recording.with_samples(filtered, recording.sampling_rate()))
}

/// Anti-alias order used when downsampling.
const ANTI_ALIAS_ORDER: usize = 4;

/// Linear-interpolation resampler; low-passes at `0.45 * target_rate` first when
/// the rate decreases.
pub fn resample(recording: &EegRecording, target_rate: f64) -> Result<EegRecording> {
    if !(target_rate > 0.0) || !target_rate.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "target rate must be positive, got {target_rate}"
        )));
    }
    let source_rate = recording.sampling_rate();
    if target_rate == source_rate {
        return Ok(recording.clone());
    }
    let n = recording.n_samples();
    let new_len = (n as f64 * target_rate / source_rate).round() as usize;
    let source: Vec<Vec<f64>> = if target_rate < source_rate {
        let min = 3 * ANTI_ALIAS_ORDER;
        if n <= min {
            return Err(Error::SignalTooShort { len: n, min });
        }
        let lp = SosFilter::lowpass(ANTI_ALIAS_ORDER, 0.45 * target_rate, source_rate)?;
        recording.samples().par_iter().map(|ch| lp.filtfilt(ch)).collect()
    } else {
        recording.samples().to_vec()
    };
    let step = source_rate / target_rate;
    let out = source
        .iter()
        .map(|ch| (0..new_len).map(|i| interpolate(ch, i as f64 * step)).collect())
        .collect();
    Ok(recording.with_samples(out, target_rate))
}

fn interpolate(x: &[f64], pos: f64) -> f64 {
    let last = x.len() - 1;
    if pos >= last as f64 {
        return x[last];
    }
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    if frac == 0.0 {
        x[i]
    } else {
        x[i] * (1.0 - frac) + x[i + 1] * frac
    }
}
