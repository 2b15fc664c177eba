use serde::{Deserialize, Serialize};

use super::welch::{trapezoid, PsdEstimate};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Band {
    Delta,
    Theta,
    Alpha,
    Beta,
    Gamma,
}

impl Band {
    pub const ALL: [Band; 5] = [Band::Delta, Band::Theta, Band::Alpha, Band::Beta, Band::Gamma];

    pub fn name(self) -> &'static str {
        match self {
            Band::Delta => "delta",
            Band::Theta => "theta",
            Band::Alpha => "alpha",
            Band::Beta => "beta",
            Band::Gamma => "gamma",
        }
    }

    /// Default edges. Gamma is capped at the 45 Hz band-pass edge.
    pub fn definition(self) -> BandDefinition {
        let (low_hz, high_hz) = match self {
            Band::Delta => (0.5, 4.0),
            Band::Theta => (4.0, 8.0),
            Band::Alpha => (8.0, 13.0),
            Band::Beta => (13.0, 30.0),
            Band::Gamma => (30.0, 45.0),
        };
        BandDefinition {
            name: self,
            low_hz,
            high_hz,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandDefinition {
    pub name: Band,
    pub low_hz: f64,
    pub high_hz: f64,
}

impl BandDefinition {
    pub fn new(name: Band, low_hz: f64, high_hz: f64) -> Result<Self> {
        if !(0.0 <= low_hz && low_hz < high_hz) {
            return Err(Error::InvalidParameter(format!(
                "band edges must satisfy 0 <= low < high, got {low_hz}..{high_hz}"
            )));
        }
        Ok(Self { name, low_hz, high_hz })
    }

    pub fn standard() -> [BandDefinition; 5] {
        Band::ALL.map(Band::definition)
    }
}

/// Trapezoidal integral of each channel's PSD over the grid points lying in
/// `[low_hz, high_hz]`. Bands that share an edge on the grid add up exactly.
pub fn band_power(psd: &PsdEstimate, band: &BandDefinition) -> Result<Vec<f64>> {
    let max_hz = psd.max_frequency();
    let eps = 1e-9 * psd.resolution_hz();
    if band.low_hz < 0.0 || band.high_hz > max_hz + eps || band.low_hz >= band.high_hz {
        return Err(Error::BandOutOfRange {
            low_hz: band.low_hz,
            high_hz: band.high_hz,
            max_hz,
        });
    }
    let idx: Vec<usize> = psd
        .frequencies_hz
        .iter()
        .enumerate()
        .filter(|(_, &f)| f >= band.low_hz - eps && f <= band.high_hz + eps)
        .map(|(i, _)| i)
        .collect();
    let freqs: Vec<f64> = idx.iter().map(|&i| psd.frequencies_hz[i]).collect();
    Ok(psd
        .power
        .iter()
        .map(|p| {
            let vals: Vec<f64> = idx.iter().map(|&i| p[i]).collect();
            trapezoid(&freqs, &vals).max(0.0)
        })
        .collect())
}
