mod common;

use common::*;
use eeg_emotion::dataio::{artifact_from_str, artifact_to_string, generate_synthetic, SyntheticSpec};
use eeg_emotion::eval::{classification_metrics, compare_models, confusion_matrix, stratified_split, EvaluationReport};
use eeg_emotion::models::{ModelKind, ModelParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn accuracy_matches_direct_agreement() {
    let mut rng = ChaCha8Rng::seed_from_u64(200);
    for _ in 0..200 {
        let n = rng.random_range(1..80);
        let t: Vec<usize> = (0..n).map(|_| rng.random_range(0..3)).collect();
        let p: Vec<usize> = (0..n).map(|_| rng.random_range(0..3)).collect();
        let direct = t.iter().zip(&p).filter(|(a, b)| a == b).count() as f64 / n as f64;
        assert_eq!(confusion_matrix(&t, &p).unwrap().accuracy().unwrap(), direct);
    }
}

#[test]
fn balanced_supports_make_f1_averages_equal() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let k = rng.random_range(1..20);
        let t: Vec<usize> = (0..3 * k).map(|i| i % 3).collect();
        let p: Vec<usize> = (0..3 * k).map(|_| rng.random_range(0..3)).collect();
        let m = classification_metrics(&confusion_matrix(&t, &p).unwrap()).unwrap();
        assert_eq!(m.macro_f1, m.weighted_f1);
    }
}

#[test]
fn separable_synthetic_data() {
    for (kind, acc) in synthetic_accuracies(10.0, 1) {
        assert!(acc >= 0.99, "{kind:?}: {acc}");
    }
}

#[test]
fn unseparated_synthetic_data_is_at_chance() {
    for (kind, acc) in synthetic_accuracies(0.0, 1) {
        assert!((0.20..=0.47).contains(&acc), "{kind:?}: {acc}");
    }
}

#[test]
fn report_is_well_formed_and_round_trips() {
    let ds = generate_synthetic(&SyntheticSpec::new(40, 4, 3.0, 5)).unwrap();
    let split = stratified_split(&ds, 0.3, 42).unwrap();
    let mut params = ModelParams::default();
    params.forest.n_trees = 25;
    let report = compare_models(&ds, &split, &[ModelKind::Rf, ModelKind::Lr, ModelKind::Svm], &params).unwrap();
    let order: Vec<ModelKind> = report.models.iter().map(|m| m.model).collect();
    assert_eq!(order, ModelKind::ALL);
    assert_eq!(report.split, split);
    for m in &report.models {
        assert_eq!(m.confusion.total(), split.test_rows.len());
        assert_eq!(
            m.metrics.accuracy,
            m.confusion.trace() as f64 / m.confusion.total() as f64
        );
        assert!((0.0..=1.0).contains(&m.metrics.weighted_f1));
    }
    let table = report.render_table();
    assert!(table.starts_with("Model"));
    assert!(table.contains("Ranking: "));
    let back: EvaluationReport = artifact_from_str(&artifact_to_string(&report).unwrap()).unwrap();
    assert_eq!(back.models.len(), 3);
    assert_eq!(back.ranking, report.ranking);
}
