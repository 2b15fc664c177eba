//! Fit each classifier on a training split, round-trip it through its JSON
//! artifact and score the reloaded model on the held-out rows.
//!
//! ```text
//! cargo run --release --example train_classifiers
//! ```

use eeg_emotion::dataio::{artifact_from_str, artifact_to_string, generate_synthetic, SyntheticSpec};
use eeg_emotion::eval::{classification_metrics, confusion_matrix, stratified_split};
use eeg_emotion::models::{ModelBundle, ModelKind, ModelParams, TrainedModel};

fn main() -> eeg_emotion::Result<()> {
    let ds = generate_synthetic(&SyntheticSpec::new(120, 8, 2.0, 7))?;
    let split = stratified_split(&ds, 0.3, 42)?;
    let train = ds.subset(&split.train_rows);
    let test = ds.subset(&split.test_rows);
    println!("train {} rows, test {} rows\n", train.n_samples(), test.n_samples());

    let params = ModelParams::default();
    for kind in ModelKind::ALL {
        let bundle = ModelBundle::fit(kind, &train, &params)?;
        let json = artifact_to_string(&bundle)?;
        let reloaded: ModelBundle = artifact_from_str(&json)?;

        let pred = reloaded.predict(test.features())?;
        assert_eq!(pred, bundle.predict(test.features())?);
        let metrics = classification_metrics(&confusion_matrix(test.labels(), &pred)?)?;

        let detail = match &bundle.model {
            TrainedModel::LogReg(m) => format!("{} gradient steps", m.training_history.len()),
            TrainedModel::Svm(m) => format!(
                "{} support vectors over 3 pairs",
                m.pairs.iter().map(|p| p.model.support_vectors.len()).sum::<usize>()
            ),
            TrainedModel::RandomForest(m) => format!("{} trees, mtry {}", m.trees.len(), m.mtry),
        };
        println!(
            "{:<20} accuracy {:.3}  weighted F1 {:.3}  ({detail}, {} KB JSON)",
            kind.display_name(),
            metrics.accuracy,
            metrics.weighted_f1,
            json.len() / 1024
        );
    }
    Ok(())
}
