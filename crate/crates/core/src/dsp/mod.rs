//! Signal conditioning and spectral analysis.

mod bands;
mod butterworth;
mod filter;
mod welch;

pub use bands::{band_power, Band, BandDefinition};
pub use butterworth::{Biquad, SosFilter};
pub use filter::{bandpass_filter, resample, FilterSpec};
pub use welch::{welch_psd, PsdEstimate, WelchConfig};
