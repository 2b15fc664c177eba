//! Butterworth filter design (bilinear transform, second-order sections) and
//! zero-phase forward-backward application.

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One second-order section, `a[0] == 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Biquad {
    pub b: [f64; 3],
    pub a: [f64; 3],
}

impl Biquad {
    fn response(&self, z: Complex64) -> Complex64 {
        let zi = z.inv();
        let zi2 = zi * zi;
        (self.b[0] + zi * self.b[1] + zi2 * self.b[2]) / (self.a[0] + zi * self.a[1] + zi2 * self.a[2])
    }
}

/// Cascade of second-order sections.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SosFilter {
    pub sections: Vec<Biquad>,
}

fn prototype_poles(order: usize) -> Vec<Complex64> {
    (0..order)
        .map(|k| {
            let theta = std::f64::consts::PI * (2 * k + order + 1) as f64 / (2 * order) as f64;
            Complex64::from_polar(1.0, theta)
        })
        .collect()
}

#[inline]
fn prewarp(f_hz: f64, fs: f64) -> f64 {
    2.0 * fs * (std::f64::consts::PI * f_hz / fs).tan()
}

#[inline]
fn bilinear(s: Complex64, fs: f64) -> Complex64 {
    let k = Complex64::new(2.0 * fs, 0.0);
    (k + s) / (k - s)
}

/// Group digital poles into conjugate pairs (complex) or pairs of reals, each
/// producing a denominator `[1, a1, a2]`. A single leftover real pole yields a
/// first-order denominator `[1, -p, 0]`.
fn pole_denominators(poles: &[Complex64]) -> Vec<[f64; 3]> {
    let scale = poles.iter().map(|p| p.norm()).fold(1.0, f64::max);
    let tol = 1e-10 * scale;
    let mut complex: Vec<Complex64> = poles.iter().copied().filter(|p| p.im > tol).collect();
    let mut real: Vec<f64> = poles.iter().filter(|p| p.im.abs() <= tol).map(|p| p.re).collect();
    complex.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
    real.sort_by(f64::total_cmp);
    let mut out: Vec<[f64; 3]> = complex.iter().map(|p| [1.0, -2.0 * p.re, p.norm_sqr()]).collect();
    let mut it = real.chunks(2);
    for pair in &mut it {
        match pair {
            [p1, p2] => out.push([1.0, -(p1 + p2), p1 * p2]),
            [p] => out.push([1.0, -p, 0.0]),
            _ => unreachable!(),
        }
    }
    out
}

impl SosFilter {
    /// Butterworth band-pass built from an `order`-pole low-pass prototype, giving
    /// `2 * order` poles in `order` sections.
    pub fn bandpass(order: usize, low_hz: f64, high_hz: f64, fs: f64) -> Result<Self> {
        validate_order(order)?;
        let nyquist = fs / 2.0;
        if !(low_hz > 0.0) || !(low_hz < high_hz) {
            return Err(Error::InvalidParameter(format!(
                "band-pass edges must satisfy 0 < low < high, got {low_hz}..{high_hz}"
            )));
        }
        if high_hz >= nyquist {
            return Err(Error::AboveNyquist {
                edge_hz: high_hz,
                nyquist_hz: nyquist,
            });
        }
        let wl = prewarp(low_hz, fs);
        let wh = prewarp(high_hz, fs);
        let bw = wh - wl;
        let w0_sq = wl * wh;
        let mut poles = Vec::with_capacity(2 * order);
        for p in prototype_poles(order) {
            let half = p * (bw / 2.0);
            let root = (half * half - w0_sq).sqrt();
            poles.push(bilinear(half + root, fs));
            poles.push(bilinear(half - root, fs));
        }
        let sections = pole_denominators(&poles)
            .into_iter()
            .map(|a| Biquad { b: [1.0, 0.0, -1.0], a })
            .collect();
        let mut filter = SosFilter { sections };
        // Analog gain at the geometric centre is exactly one; match it digitally.
        let center = 2.0 * (w0_sq.sqrt() / (2.0 * fs)).atan();
        filter.normalize_at(center);
        Ok(filter)
    }

    /// Butterworth low-pass with unit DC gain.
    pub fn lowpass(order: usize, cutoff_hz: f64, fs: f64) -> Result<Self> {
        validate_order(order)?;
        let nyquist = fs / 2.0;
        if !(cutoff_hz > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "low-pass cutoff must be positive, got {cutoff_hz}"
            )));
        }
        if cutoff_hz >= nyquist {
            return Err(Error::AboveNyquist {
                edge_hz: cutoff_hz,
                nyquist_hz: nyquist,
            });
        }
        let wc = prewarp(cutoff_hz, fs);
        let poles: Vec<Complex64> = prototype_poles(order)
            .into_iter()
            .map(|p| bilinear(p * wc, fs))
            .collect();
        let sections = pole_denominators(&poles)
            .into_iter()
            .map(|a| {
                let b = if a[2] == 0.0 { [1.0, 1.0, 0.0] } else { [1.0, 2.0, 1.0] };
                Biquad { b, a }
            })
            .collect();
        let mut filter = SosFilter { sections };
        filter.normalize_at(0.0);
        Ok(filter)
    }

    fn normalize_at(&mut self, omega: f64) {
        let g = self.response_at(omega).norm();
        if let Some(first) = self.sections.first_mut() {
            for b in first.b.iter_mut() {
                *b /= g;
            }
        }
    }

    /// Complex frequency response at normalized angular frequency `omega` (rad/sample).
    pub fn response_at(&self, omega: f64) -> Complex64 {
        let z = Complex64::from_polar(1.0, omega);
        self.sections
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, s| acc * s.response(z))
    }

    /// Magnitude response at `f_hz` for sampling rate `fs`.
    pub fn magnitude_at(&self, f_hz: f64, fs: f64) -> f64 {
        self.response_at(2.0 * std::f64::consts::PI * f_hz / fs).norm()
    }

    /// Steady-state section states for a unit step input (scaled later by the
    /// first input sample), transposed direct form II.
    fn step_initial_state(&self) -> Vec<[f64; 2]> {
        let mut level = 1.0;
        self.sections
            .iter()
            .map(|s| {
                let gain = s.b.iter().sum::<f64>() / s.a.iter().sum::<f64>();
                let y = gain * level;
                let z2 = s.b[2] * level - s.a[2] * y;
                let z1 = s.b[1] * level - s.a[1] * y + z2;
                level = y;
                [z1, z2]
            })
            .collect()
    }

    /// Causal filtering with optional initial states.
    pub fn filter(&self, x: &[f64], init: Option<&[[f64; 2]]>) -> Vec<f64> {
        let mut y = x.to_vec();
        for (k, s) in self.sections.iter().enumerate() {
            let [mut z1, mut z2] = init.map_or([0.0, 0.0], |st| st[k]);
            for v in y.iter_mut() {
                let input = *v;
                let out = s.b[0] * input + z1;
                z1 = s.b[1] * input - s.a[1] * out + z2;
                z2 = s.b[2] * input - s.a[2] * out;
                *v = out;
            }
        }
        y
    }

    /// Number of samples of odd-symmetric padding used by [`SosFilter::filtfilt`].
    pub fn pad_length(&self) -> usize {
        3 * (2 * self.sections.len() + 1)
    }

    /// Zero-phase filtering: odd-extension padding, forward pass, reverse pass,
    /// both started from the step steady state scaled by the edge sample.
    pub fn filtfilt(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        if n == 0 {
            return Vec::new();
        }
        let pad = self.pad_length().min(n - 1);
        let mut ext = Vec::with_capacity(n + 2 * pad);
        let (first, last) = (x[0], x[n - 1]);
        ext.extend((1..=pad).rev().map(|i| 2.0 * first - x[i]));
        ext.extend_from_slice(x);
        ext.extend((1..=pad).map(|i| 2.0 * last - x[n - 1 - i]));

        let zi = self.step_initial_state();
        let scaled = |v: f64| -> Vec<[f64; 2]> { zi.iter().map(|s| [s[0] * v, s[1] * v]).collect() };

        let fwd = self.filter(&ext, Some(&scaled(ext[0])));
        let mut rev: Vec<f64> = fwd.into_iter().rev().collect();
        rev = self.filter(&rev, Some(&scaled(rev[0])));
        rev.reverse();
        rev[pad..pad + n].to_vec()
    }
}

fn validate_order(order: usize) -> Result<()> {
    if order == 0 {
        return Err(Error::InvalidParameter("filter order must be >= 1".into()));
    }
    Ok(())
}
