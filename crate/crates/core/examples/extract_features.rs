//! Cut labelled recordings into overlapping one-second windows and turn each
//! window into 12 features per channel, then write the table as CSV.
//!
//! ```text
//! cargo run --example extract_features [out.csv]
//! ```

use std::f64::consts::PI;

use eeg_emotion::dataio::{write_feature_csv, EegRecording, Emotion};
use eeg_emotion::dsp::WelchConfig;
use eeg_emotion::featext::{concat_datasets, featurize_recording, WindowPlan};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// One minute at 150 Hz whose dominant rhythm depends on the emotion.
fn recording(emotion: Emotion, seed: u64) -> EegRecording {
    let fs = 150.0;
    let rhythm = match emotion {
        Emotion::Negative => 6.0,
        Emotion::Neutral => 10.0,
        Emotion::Positive => 20.0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, 3.0).unwrap();
    let samples = (0..4)
        .map(|c| {
            (0..60 * 150)
                .map(|k| {
                    let t = k as f64 / fs;
                    8.0 * (2.0 * PI * (rhythm + 0.5 * c as f64) * t).sin() + noise.sample(&mut rng)
                })
                .collect()
        })
        .collect();
    let names = ["TP9", "AF7", "AF8", "TP10"].map(String::from).to_vec();
    EegRecording::new(names, samples, fs).unwrap()
}

fn main() -> eeg_emotion::Result<()> {
    let plan = WindowPlan::default();
    let welch = WelchConfig::default();
    let parts = Emotion::ALL
        .iter()
        .enumerate()
        .map(|(i, &e)| featurize_recording(&recording(e, i as u64), e, &plan, &welch))
        .collect::<eeg_emotion::Result<Vec<_>>>()?;
    let table = concat_datasets(&parts)?;

    println!(
        "{} windows x {} features, class counts {:?}",
        table.n_samples(),
        table.n_features(),
        table.class_counts()
    );
    println!("first channel's features:");
    for (j, name) in table.feature_names().iter().take(12).enumerate() {
        println!("  {name:<20} {:>12.4}", table.features().get(0, j));
    }

    if let Some(path) = std::env::args().nth(1) {
        write_feature_csv(&table, &path)?;
        println!("wrote {path}");
    }
    Ok(())
}
