//! Band-pass a four-channel headband recording, resample it to 150 Hz and
//! print per-channel band powers from the Welch PSD.
//!
//! ```text
//! cargo run --example filter_and_psd [raw.csv] [sampling_rate]
//! ```
//!
//! Without arguments a synthetic 256 Hz recording is used: each channel mixes
//! an alpha rhythm, a little beta, 60 Hz mains hum and white noise.

use std::f64::consts::PI;

use eeg_emotion::dataio::{load_raw_eeg, EegRecording};
use eeg_emotion::dsp::{band_power, bandpass_filter, resample, welch_psd, Band, FilterSpec, WelchConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn synthetic_recording() -> EegRecording {
    let fs = 256.0;
    let n = 10 * 256;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let noise = Normal::new(0.0, 2.0).unwrap();
    let channels = ["TP9", "AF7", "AF8", "TP10"];
    let samples = (0..channels.len())
        .map(|c| {
            (0..n)
                .map(|k| {
                    let t = k as f64 / fs;
                    let alpha = (10.0 - c as f64) * (2.0 * PI * 10.0 * t).sin();
                    let beta = 3.0 * (2.0 * PI * 20.0 * t).sin();
                    let hum = 15.0 * (2.0 * PI * 60.0 * t).sin();
                    alpha + beta + hum + noise.sample(&mut rng)
                })
                .collect()
        })
        .collect();
    EegRecording::new(channels.iter().map(|s| s.to_string()).collect(), samples, fs).unwrap()
}

fn main() -> eeg_emotion::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let raw = match args.first() {
        Some(path) => {
            let fs = args
                .get(1)
                .map_or(Ok(256.0), |s| s.parse())
                .expect("sampling rate must be a number");
            load_raw_eeg(path, fs)?
        }
        None => synthetic_recording(),
    };
    println!(
        "{} channels, {} samples at {} Hz",
        raw.n_channels(),
        raw.n_samples(),
        raw.sampling_rate()
    );

    let filtered = bandpass_filter(&raw, &FilterSpec::default())?;
    let conditioned = resample(&filtered, 150.0)?;
    let psd = welch_psd(&conditioned, &WelchConfig::default())?;
    println!(
        "PSD: {} bins, {:.2} Hz resolution\n",
        psd.frequencies_hz.len(),
        psd.resolution_hz()
    );

    print!("{:<8}", "channel");
    for band in Band::ALL {
        print!("{:>10}", band.name());
    }
    println!("{:>10}", "total");
    let powers: Vec<Vec<f64>> = Band::ALL
        .iter()
        .map(|b| band_power(&psd, &b.definition()))
        .collect::<eeg_emotion::Result<_>>()?;
    let totals = psd.total_power();
    for (c, name) in psd.channels.iter().enumerate() {
        print!("{name:<8}");
        for p in &powers {
            print!("{:>10.3}", p[c]);
        }
        println!("{:>10.3}", totals[c]);
    }
    Ok(())
}
