//! One-vs-rest Welch t-tests per emotion and the strongest feature
//! correlations on a feature table.
//!
//! ```text
//! cargo run --example feature_statistics [features.csv]
//! ```
//!
//! Without an argument, a synthetic table is generated in which only some
//! features carry class information.

use eeg_emotion::analysis::{correlation_matrix, significance_summary};
use eeg_emotion::dataio::{generate_synthetic, load_feature_dataset, SyntheticSpec};

fn main() -> eeg_emotion::Result<()> {
    let ds = match std::env::args().nth(1) {
        Some(path) => load_feature_dataset(path, "label")?,
        None => generate_synthetic(&SyntheticSpec::new(150, 20, 1.0, 3))?,
    };
    println!("{} rows, {} features\n", ds.n_samples(), ds.n_features());

    let summary = significance_summary(&ds, 0.05)?;
    println!("{:<10}{:>14}{:>18}", "class", "significant", "non-significant");
    for class in &summary.classes {
        println!(
            "{:<10}{:>14}{:>18}",
            class.class.name(),
            class.significant,
            class.non_significant
        );
    }

    for class in &summary.classes {
        let mut tests: Vec<_> = class.tests.iter().collect();
        tests.sort_by(|a, b| b.t_statistic.abs().total_cmp(&a.t_statistic.abs()));
        println!("\nstrongest features for {}:", class.class.name());
        for t in tests.iter().take(3) {
            println!(
                "  {:<24} t = {:>8.3}  df = {:>7.1}  p = {:.2e}",
                t.feature_name, t.t_statistic, t.degrees_of_freedom, t.p_value
            );
        }
    }

    let corr = correlation_matrix(ds.features(), ds.feature_names())?;
    let p = ds.n_features();
    let mut pairs: Vec<(usize, usize, f64)> = (0..p)
        .flat_map(|i| (i + 1..p).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, corr.get(i, j)))
        .collect();
    pairs.sort_by(|a, b| b.2.abs().total_cmp(&a.2.abs()));
    println!("\nmost correlated feature pairs:");
    for (i, j, r) in pairs.into_iter().take(5) {
        println!(
            "  {:<24} {:<24} r = {r:>7.4}",
            ds.feature_names()[i],
            ds.feature_names()[j]
        );
    }
    Ok(())
}
