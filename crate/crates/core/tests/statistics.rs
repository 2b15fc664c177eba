mod common;

use common::*;
use eeg_emotion::analysis::special::student_t_two_sided_p;
use eeg_emotion::analysis::{
    conditional_affinities, correlation_matrix, significance_summary, tsne_embed, welch_t_test, TsneParams,
};
use eeg_emotion::Matrix;

#[test]
fn welch_closed_form() {
    let r = welch_t_test(&[1.0, 2.0, 3.0, 4.0, 5.0], &[2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
    assert_eq!(r.t_statistic, -1.0);
    assert_eq!(r.degrees_of_freedom, 8.0);
}

#[test]
fn quadrature_oracle_reproduces_cauchy() {
    for t in [0.2, 1.0, 7.5] {
        let want = 1.0 - 2.0 * f64::atan(t) / std::f64::consts::PI;
        assert!((t_tail_by_quadrature(t, 1.0) - want).abs() < 1e-13);
    }
}

#[test]
fn p_values_match_numerical_integration() {
    for (t, df) in p_value_pairs() {
        let engine = student_t_two_sided_p(t, df);
        let oracle = t_tail_by_quadrature(t, df);
        assert!(
            (engine - oracle).abs() < 1e-10,
            "t = {t}, df = {df}: {engine} vs {oracle}"
        );
    }
}

#[test]
fn pearson_three_points() {
    let x = Matrix::from_rows(&[[1.0, 1.0], [2.0, 2.0], [3.0, 4.0]]).unwrap();
    let names = vec!["a".to_string(), "b".to_string()];
    let r = correlation_matrix(&x, &names).unwrap().values[0][1];
    assert!((r - pearson(&[1.0, 2.0, 3.0], &[1.0, 2.0, 4.0])).abs() < 1e-14);
    assert!((r - 0.9820).abs() < 5e-5, "r = {r}");
}

#[test]
fn shuffled_labels_give_nominal_significance_rate() {
    let ds = shuffled_label_dataset(300, 1000, 77);
    let summary = significance_summary(&ds, 0.05).unwrap();
    let (lo, hi) = binomial_interval_99(1000, 0.05);
    for class in &summary.classes {
        assert!(
            (lo..=hi).contains(&class.significant),
            "{:?}: {} significant, 99% band {lo}..={hi}",
            class.class,
            class.significant
        );
    }
}

#[test]
fn tsne_calibration_and_convergence() {
    let (x, labels) = two_clusters(40, 10, 3);
    let cond = conditional_affinities(&x, 15.0).unwrap();
    for h in &cond.entropies {
        assert!((h - 15f64.log2()).abs() <= 1e-3);
    }
    let params = TsneParams {
        perplexity: 15.0,
        ..Default::default()
    };
    let emb = tsne_embed(&x, &params).unwrap();
    assert!(emb.max_entropy_error <= 1e-3);
    assert!(emb.final_kl < emb.kl_after_exaggeration);
    let s = silhouette(&emb.coordinates, &labels);
    assert!(s > 0.8, "silhouette {s}");
}
