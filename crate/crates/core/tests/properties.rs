use eeg_emotion::analysis::{correlation_matrix, welch_t_test};
use eeg_emotion::dataio::{EegRecording, LabeledDataset};
use eeg_emotion::dsp::{band_power, welch_psd, Band, BandDefinition, WelchConfig};
use eeg_emotion::eval::{classification_metrics, confusion_matrix, stratified_split};
use eeg_emotion::featext::{descriptive_statistics, Standardizer};
use eeg_emotion::models::{sigmoid, vote, LogRegModel};
use eeg_emotion::Matrix;
use proptest::prelude::*;

fn labels_strategy(max_len: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..3, 0..max_len)
}

fn dataset_with_counts(counts: [usize; 3]) -> LabeledDataset {
    let labels: Vec<usize> = (0..3).flat_map(|c| std::iter::repeat_n(c, counts[c])).collect();
    let n = labels.len();
    let x = Matrix::from_vec(n, 1, (0..n).map(|i| i as f64).collect()).unwrap();
    LabeledDataset::new(x, vec!["x".into()], labels).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn split_partitions_and_stratifies(
        counts in prop::array::uniform3(4usize..60),
        frac in 0.15f64..0.85,
        seed in any::<u64>(),
    ) {
        let ds = dataset_with_counts(counts);
        let split = stratified_split(&ds, frac, seed).unwrap();
        let mut all: Vec<usize> = split.train_rows.iter().chain(&split.test_rows).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..ds.n_samples()).collect::<Vec<_>>());
        let test_counts = ds.subset(&split.test_rows).class_counts();
        for c in 0..3 {
            let target = counts[c] as f64 * frac;
            prop_assert!((test_counts[c] as f64 - target).abs() <= 1.0);
        }
        prop_assert_eq!(split.clone(), stratified_split(&ds, frac, seed).unwrap());
    }

    #[test]
    fn confusion_totals(t in labels_strategy(60), seed in any::<u64>()) {
        let p: Vec<usize> = t.iter().enumerate().map(|(i, &v)| (v + (seed as usize >> (i % 32))) % 3).collect();
        let cm = confusion_matrix(&t, &p).unwrap();
        prop_assert_eq!(cm.total(), t.len());
        let support = cm.support();
        for c in 0..3 {
            prop_assert_eq!(support[c], t.iter().filter(|&&v| v == c).count());
        }
    }

    #[test]
    fn metrics_ignore_sample_order(pairs in prop::collection::vec((0usize..3, 0usize..3), 1..60), rot in 0usize..60) {
        let (t, p): (Vec<usize>, Vec<usize>) = pairs.iter().copied().unzip();
        let k = rot % t.len();
        let (mut t2, mut p2) = (t.clone(), p.clone());
        t2.rotate_left(k);
        p2.rotate_left(k);
        let a = classification_metrics(&confusion_matrix(&t, &p).unwrap()).unwrap();
        let b = classification_metrics(&confusion_matrix(&t2, &p2).unwrap()).unwrap();
        prop_assert_eq!(a.clone(), b);
        for m in &a.per_class {
            prop_assert!((0.0..=1.0).contains(&m.f1));
        }
    }

    #[test]
    fn sigmoid_is_symmetric_and_bounded(x in -700.0f64..700.0) {
        let s = sigmoid(x);
        prop_assert!((0.0..=1.0).contains(&s));
        prop_assert!((s + sigmoid(-x) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn softmax_rows_sum_to_one(
        w in prop::collection::vec(-20.0f64..20.0, 6),
        b in prop::collection::vec(-5.0f64..5.0, 3),
        x in prop::collection::vec(-10.0f64..10.0, 2),
    ) {
        let model = LogRegModel {
            weights: w.chunks(2).map(<[f64]>::to_vec).collect(),
            biases: b,
            l2_lambda: 0.0,
            training_history: vec![],
        };
        let m = Matrix::from_vec(1, 2, x).unwrap();
        let p = model.predict_proba(&m).unwrap()[0];
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn vote_picks_a_pair_winner(f in prop::array::uniform3(-2.0f64..2.0)) {
        let decisions = [(0, 1, f[0]), (0, 2, f[1]), (1, 2, f[2])];
        let winner = vote(&decisions);
        let wins = decisions
            .iter()
            .filter(|&&(pos, neg, v)| if v >= 0.0 { pos == winner } else { neg == winner })
            .count();
        prop_assert!(wins >= 1);
    }

    #[test]
    fn welch_t_is_antisymmetric(
        a in prop::collection::vec(-100.0f64..100.0, 2..30),
        b in prop::collection::vec(-100.0f64..100.0, 2..30),
    ) {
        if let (Ok(ab), Ok(ba)) = (welch_t_test(&a, &b), welch_t_test(&b, &a)) {
            prop_assert_eq!(ab.t_statistic, -ba.t_statistic);
            prop_assert_eq!(ab.p_value, ba.p_value);
            prop_assert!((0.0..=1.0).contains(&ab.p_value));
            prop_assert!(ab.degrees_of_freedom >= (a.len().min(b.len()) - 1) as f64 - 1e-9);
            prop_assert!(ab.degrees_of_freedom <= (a.len() + b.len() - 2) as f64 + 1e-9);
        }
    }

    #[test]
    fn correlation_is_symmetric_with_unit_diagonal(data in prop::collection::vec(-50.0f64..50.0, 8 * 3)) {
        let x = Matrix::from_vec(8, 3, data).unwrap();
        let names: Vec<String> = (0..3).map(|j| format!("f{j}")).collect();
        let c = correlation_matrix(&x, &names).unwrap();
        for i in 0..3 {
            if !c.constant_columns[i] {
                prop_assert!((c.values[i][i] - 1.0).abs() < 1e-12);
            }
            for j in 0..3 {
                prop_assert_eq!(c.values[i][j], c.values[j][i]);
                prop_assert!(c.values[i][j].abs() <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn psd_is_nonnegative_and_bands_add_up(signal in prop::collection::vec(-100.0f64..100.0, 300..600)) {
        let rec = EegRecording::single("ch", signal, 150.0).unwrap();
        let psd = welch_psd(&rec, &WelchConfig::default()).unwrap();
        prop_assert!(psd.power[0].iter().all(|&p| p >= 0.0));
        let whole = band_power(&psd, &BandDefinition::new(Band::Beta, 4.0, 30.0).unwrap()).unwrap()[0];
        let parts: f64 = [(4.0, 8.0), (8.0, 13.0), (13.0, 30.0)]
            .iter()
            .map(|&(lo, hi)| band_power(&psd, &BandDefinition::new(Band::Beta, lo, hi).unwrap()).unwrap()[0])
            .sum();
        prop_assert!((whole - parts).abs() <= 1e-9 * whole.max(1.0));
    }

    #[test]
    fn statistics_are_shift_invariant(x in prop::collection::vec(-10.0f64..10.0, 3..40), shift in -1e3f64..1e3) {
        let a = descriptive_statistics(&x);
        let shifted: Vec<f64> = x.iter().map(|v| v + shift).collect();
        let b = descriptive_statistics(&shifted);
        // std and range (indices 1 and 4) do not move
        prop_assert!((a[1] - b[1]).abs() < 1e-8);
        prop_assert!((a[4] - b[4]).abs() < 1e-8);
        prop_assert!((a[0] + shift - b[0]).abs() < 1e-8);
    }

    #[test]
    fn standardized_training_columns(data in prop::collection::vec(-1e3f64..1e3, 10 * 2)) {
        let x = Matrix::from_vec(10, 2, data).unwrap();
        let s = Standardizer::fit(&x).unwrap();
        let z = s.transform(&x).unwrap();
        for j in 0..2 {
            let col = z.column(j);
            let mean = col.iter().sum::<f64>() / 10.0;
            prop_assert!(mean.abs() < 1e-9);
            if !s.constant[j] {
                let var = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 9.0;
                prop_assert!((var - 1.0).abs() < 1e-9);
            }
        }
    }
}
