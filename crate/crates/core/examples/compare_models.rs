//! Train and compare all three classifiers on a stratified 70/30 split.
//!
//! ```text
//! cargo run --release --example compare_models [features.csv]
//! ```
//!
//! Pass the published Muse feature table (label column `label`) to compare on
//! real data; otherwise a synthetic problem is used.

use std::time::Instant;

use eeg_emotion::dataio::{generate_synthetic, load_feature_dataset, SyntheticSpec};
use eeg_emotion::eval::{compare_models, stratified_split, DEFAULT_SEED, DEFAULT_TEST_FRACTION};
use eeg_emotion::models::{ModelKind, ModelParams};

fn main() -> eeg_emotion::Result<()> {
    let start = Instant::now();
    let ds = match std::env::args().nth(1) {
        Some(path) => load_feature_dataset(path, "label")?,
        None => generate_synthetic(&SyntheticSpec::new(200, 16, 1.5, 11))?,
    };
    println!(
        "{} rows x {} features, class counts {:?}\n",
        ds.n_samples(),
        ds.n_features(),
        ds.class_counts()
    );

    let split = stratified_split(&ds, DEFAULT_TEST_FRACTION, DEFAULT_SEED)?;
    let report = compare_models(&ds, &split, &ModelKind::ALL, &ModelParams::default())?;
    print!("{}", report.render_table());

    println!();
    for m in &report.models {
        println!("{:<20} trained in {:.2} s", m.name, m.training_seconds);
    }
    println!("total {:.1} s", start.elapsed().as_secs_f64());
    Ok(())
}
