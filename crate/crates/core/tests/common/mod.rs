//! Independent reference computations shared by the integration tests and
//! the acceptance report.
#![allow(dead_code)]

use eeg_emotion::dataio::{generate_synthetic, EegRecording, LabeledDataset, SyntheticSpec, N_CLASSES};
use eeg_emotion::dsp::{bandpass_filter, welch_psd, FilterSpec, WelchConfig};
use eeg_emotion::eval::{compare_models, stratified_split};
use eeg_emotion::featext::Standardizer;
use eeg_emotion::models::{
    loss_and_gradient, rbf_kernel, train_svm_binary, ForestParams, ModelKind, ModelParams, RandomForestModel, SmoFit,
    SoftmaxParameters, TreeNode,
};
use eeg_emotion::Matrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, scale: f64) -> Matrix {
    let data = (0..rows * cols)
        .map(|_| scale * rng.sample::<f64, _>(StandardNormal))
        .collect();
    Matrix::from_vec(rows, cols, data).unwrap()
}

pub fn standardized(ds: &LabeledDataset) -> LabeledDataset {
    let s = Standardizer::fit(ds.features()).unwrap();
    ds.with_features(s.transform(ds.features()).unwrap()).unwrap()
}

pub fn accuracy(pred: &[usize], truth: &[usize]) -> f64 {
    pred.iter().zip(truth).filter(|(p, t)| p == t).count() as f64 / truth.len() as f64
}

/// Central differences on every parameter, `eps = 1e-5`.
pub fn numeric_gradient(theta: &SoftmaxParameters, x: &Matrix, y: &[usize], l2: f64) -> SoftmaxParameters {
    let eps = 1e-5;
    let f = |t: &SoftmaxParameters| loss_and_gradient(t, x, y, l2).0;
    let mut g = SoftmaxParameters::zeros(x.cols());
    for c in 0..N_CLASSES {
        for j in 0..x.cols() {
            let (mut up, mut down) = (theta.clone(), theta.clone());
            up.weights[c][j] += eps;
            down.weights[c][j] -= eps;
            g.weights[c][j] = (f(&up) - f(&down)) / (2.0 * eps);
        }
        let (mut up, mut down) = (theta.clone(), theta.clone());
        up.biases[c] += eps;
        down.biases[c] -= eps;
        g.biases[c] = (f(&up) - f(&down)) / (2.0 * eps);
    }
    g
}

pub fn max_relative_gradient_error(seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = rng.random_range(2..6);
    let x = random_matrix(&mut rng, 5, d, 1.0);
    let y: Vec<usize> = (0..5).map(|_| rng.random_range(0..N_CLASSES)).collect();
    let l2 = rng.random_range(0.0..0.5);
    let mut theta = SoftmaxParameters::zeros(d);
    for v in theta.weights.iter_mut().flatten().chain(theta.biases.iter_mut()) {
        *v = rng.sample::<f64, _>(StandardNormal);
    }
    let analytic = loss_and_gradient(&theta, &x, &y, l2).1;
    let numeric = numeric_gradient(&theta, &x, &y, l2);
    let a = analytic.weights.iter().flatten().chain(&analytic.biases);
    let n = numeric.weights.iter().flatten().chain(&numeric.biases);
    a.zip(n)
        .map(|(a, n)| (a - n).abs() / a.abs().max(n.abs()).max(1e-7))
        .fold(0.0, f64::max)
}

/// Independently evaluated decision values `sum_j alpha_j y_j K(x_j, x_i) + b`
/// for every training row.
pub fn decision_values(x: &Matrix, y: &[f64], fit: &SmoFit) -> Vec<f64> {
    let g = fit.model.gamma;
    (0..x.rows())
        .map(|i| {
            (0..x.rows())
                .map(|j| fit.alphas[j] * y[j] * rbf_kernel(x.row(j), x.row(i), g))
                .sum::<f64>()
                + fit.model.bias
        })
        .collect()
}

pub struct SmoCheck {
    pub dual_monotone: bool,
    pub box_ok: bool,
    pub equality_residual: f64,
    pub kkt_violations: usize,
    pub n: usize,
}

/// Train on a noisy two-blob problem and audit the solution.
pub fn smo_audit(seed: u64, n: usize, c: f64, tol: f64) -> SmoCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = random_matrix(&mut rng, n, 2, 1.0);
    let y: Vec<f64> = (0..n)
        .map(|i| {
            let margin = x.get(i, 0) + 0.5 * x.get(i, 1) + 0.4 * rng.sample::<f64, _>(StandardNormal);
            if margin >= 0.0 {
                1.0
            } else {
                -1.0
            }
        })
        .collect();
    let fit = train_svm_binary(&x, &y, c, 0.5, tol, 10_000).unwrap();
    let f = decision_values(&x, &y, &fit);
    let kkt_violations = (0..n)
        .filter(|&i| {
            let (a, m) = (fit.alphas[i], y[i] * f[i]);
            if a == 0.0 {
                m < 1.0 - tol
            } else if a == c {
                m > 1.0 + tol
            } else {
                (m - 1.0).abs() > tol
            }
        })
        .count();
    SmoCheck {
        dual_monotone: fit.dual_objective.windows(2).all(|w| w[1] >= w[0]),
        box_ok: fit.alphas.iter().all(|&a| (0.0..=c).contains(&a)),
        equality_residual: fit.alphas.iter().zip(&y).map(|(a, y)| a * y).sum::<f64>().abs(),
        kkt_violations,
        n,
    }
}

/// Two points, gamma = 1: the dual reduces to maximizing
/// `2a - a^2 (1 - e^-1)` on a = alpha_1 = alpha_2, so `a = 1 / (1 - e^-1)`.
pub fn two_point_solution() -> (f64, f64, f64, f64) {
    let x = Matrix::from_rows(&[[0.0, 0.0], [1.0, 0.0]]).unwrap();
    let fit = train_svm_binary(&x, &[1.0, -1.0], 1e6, 1.0, 1e-9, 100).unwrap();
    let expected = 1.0 / (1.0 - (-1.0f64).exp());
    (fit.alphas[0], fit.alphas[1], expected, fit.model.decision(&[0.5, 0.0]))
}

pub fn tree_class(nodes: &[TreeNode], x: &[f64]) -> usize {
    let mut i = 0;
    while let TreeNode::Split {
        feature,
        threshold,
        left,
        right,
    } = nodes[i]
    {
        i = if x[feature] <= threshold { left } else { right };
    }
    match nodes[i] {
        TreeNode::Leaf { class } => class,
        TreeNode::Split { .. } => unreachable!(),
    }
}

/// Per-tree walk plus a hand tally; ties go to the lowest class.
pub fn vote_oracle(model: &RandomForestModel, x: &[f64]) -> usize {
    let mut tally = [0usize; N_CLASSES];
    for t in &model.trees {
        tally[tree_class(&t.nodes, x)] += 1;
    }
    let best = *tally.iter().max().unwrap();
    tally.iter().position(|&v| v == best).unwrap()
}

pub fn forest_fixture() -> (LabeledDataset, ForestParams) {
    let ds = generate_synthetic(&SyntheticSpec::new(60, 8, 1.0, 21)).unwrap();
    let params = ForestParams {
        n_trees: 40,
        seed: 7,
        ..Default::default()
    };
    (ds, params)
}

// ---------------------------------------------------------------- statistics

/// Double-exponential (tanh-sinh) quadrature of `g` on `[a, b]`. `g` receives
/// the point and its distance to `b`, so integrands singular at `b` can be
/// evaluated without cancellation.
pub fn tanh_sinh(g: impl Fn(f64, f64) -> f64, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let h = 1.0 / 256.0;
    let mut sum = 0.0;
    let mut k = 0i64;
    loop {
        let t = k as f64 * h;
        let mut contributed = false;
        for s in if k == 0 { vec![1.0] } else { vec![1.0, -1.0] } {
            let u = std::f64::consts::FRAC_PI_2 * (s * t).sinh();
            // 1 - tanh(u) and 1 + tanh(u) without cancellation
            let e = (-2.0 * u.abs()).exp();
            let (to_b, from_a) = if u >= 0.0 {
                (2.0 * e / (1.0 + e), 2.0 / (1.0 + e))
            } else {
                (2.0 / (1.0 + e), 2.0 * e / (1.0 + e))
            };
            let weight = std::f64::consts::FRAC_PI_2 * (s * t).cosh() / u.cosh().powi(2);
            if !weight.is_finite() || weight < 1e-300 || to_b == 0.0 || from_a == 0.0 {
                continue;
            }
            let x = a + half * from_a;
            let term = half * weight * g(x, half * to_b);
            sum += term;
            contributed |= term.abs() > 0.0;
        }
        k += 1;
        if !contributed && k > 8 || k > 20_000 {
            break;
        }
    }
    h * sum
}

/// Two-sided Student-t tail from the density alone. With `x = sqrt(df) tan(theta)`
/// the density becomes proportional to `cos(theta)^(df-1)`, so
/// `p = int_{theta0}^{pi/2} cos^(df-1) / int_0^{pi/2} cos^(df-1)`.
pub fn t_tail_by_quadrature(t: f64, df: f64) -> f64 {
    let pi2 = std::f64::consts::FRAC_PI_2;
    let g = |_: f64, to_end: f64| to_end.sin().powf(df - 1.0);
    let theta0 = (t.abs() / df.sqrt()).atan();
    tanh_sinh(g, theta0, pi2) / tanh_sinh(g, 0.0, pi2)
}

/// Pearson r from the textbook formula.
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    sxy / (sxx * syy).sqrt()
}

pub fn p_value_pairs() -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..50)
        .map(|_| (rng.random_range(0.05..8.0), rng.random_range(1.0..120.0)))
        .collect()
}

/// Pure-noise features with labels shuffled away from any structure.
pub fn shuffled_label_dataset(n_rows: usize, n_features: usize, seed: u64) -> LabeledDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = random_matrix(&mut rng, n_rows, n_features, 1.0);
    let mut labels: Vec<usize> = (0..n_rows).map(|i| i % 3).collect();
    labels.shuffle(&mut rng);
    let names = (0..n_features).map(|j| format!("f{j}")).collect();
    LabeledDataset::new(x, names, labels).unwrap()
}

/// Central 99% interval of Binomial(n, p), from the exact pmf.
pub fn binomial_interval_99(n: usize, p: f64) -> (usize, usize) {
    let mut pmf = vec![0.0; n + 1];
    let mut ln_choose = 0.0f64;
    for k in 0..=n {
        if k > 0 {
            ln_choose += ((n - k + 1) as f64).ln() - (k as f64).ln();
        }
        pmf[k] = (ln_choose + k as f64 * p.ln() + (n - k) as f64 * (1.0 - p).ln()).exp();
    }
    let (mut lo, mut acc) = (0, 0.0);
    while acc + pmf[lo] < 0.005 {
        acc += pmf[lo];
        lo += 1;
    }
    let (mut hi, mut acc) = (n, 0.0);
    while acc + pmf[hi] < 0.005 {
        acc += pmf[hi];
        hi -= 1;
    }
    (lo, hi)
}

// ---------------------------------------------------------------- t-SNE

/// Two well separated Gaussian clusters in `dim` dimensions.
pub fn two_clusters(n_per: usize, dim: usize, seed: u64) -> (Matrix, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for c in 0..2 {
        for _ in 0..n_per {
            rows.push(
                (0..dim)
                    .map(|j| {
                        let centre = if j == 0 { 10.0 * c as f64 } else { 0.0 };
                        centre + rng.sample::<f64, _>(StandardNormal)
                    })
                    .collect::<Vec<f64>>(),
            );
            labels.push(c);
        }
    }
    (Matrix::from_rows(&rows).unwrap(), labels)
}

/// Mean silhouette of a 2-D labelled point set.
pub fn silhouette(points: &[[f64; 2]], labels: &[usize]) -> f64 {
    let n = points.len();
    let dist = |a: [f64; 2], b: [f64; 2]| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
    let n_classes = labels.iter().max().unwrap() + 1;
    let mut total = 0.0;
    for i in 0..n {
        let mut sums = vec![0.0; n_classes];
        let mut counts = vec![0usize; n_classes];
        for j in 0..n {
            if i != j {
                sums[labels[j]] += dist(points[i], points[j]);
                counts[labels[j]] += 1;
            }
        }
        let own = labels[i];
        let a = sums[own] / counts[own].max(1) as f64;
        let b = (0..n_classes)
            .filter(|&c| c != own && counts[c] > 0)
            .map(|c| sums[c] / counts[c] as f64)
            .fold(f64::INFINITY, f64::min);
        total += (b - a) / a.max(b);
    }
    total / n as f64
}

// ---------------------------------------------------------------- signals

pub fn sine(freq: f64, amplitude: f64, fs: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| amplitude * (2.0 * std::f64::consts::PI * freq * k as f64 / fs).sin())
        .collect()
}

pub fn white_noise(n: usize, sd: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| sd * rng.sample::<f64, _>(StandardNormal)).collect()
}

/// Population variance.
pub fn variance(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n
}

/// RMS of `x[skip..len - skip]`.
pub fn rms_trimmed(x: &[f64], skip: usize) -> f64 {
    let core = &x[skip..x.len() - skip];
    (core.iter().map(|v| v * v).sum::<f64>() / core.len() as f64).sqrt()
}

/// Lag (in samples, within `±max_lag`) maximizing the cross-correlation of
/// `y` against `x`.
pub fn best_lag(x: &[f64], y: &[f64], max_lag: i64) -> i64 {
    let n = x.len() as i64;
    (-max_lag..=max_lag)
        .map(|lag| {
            let c: f64 = (0..n)
                .filter_map(|k| {
                    let j = k + lag;
                    (0..n).contains(&j).then(|| x[k as usize] * y[j as usize])
                })
                .sum();
            (lag, c)
        })
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap()
        .0
}

pub fn decibels(ratio: f64) -> f64 {
    20.0 * ratio.log10()
}

pub const FS: f64 = 150.0;

/// PSD integral of a single-channel signal sampled at `FS`.
pub fn psd_integral(x: Vec<f64>, segment: usize) -> f64 {
    let rec = EegRecording::single("ch", x, FS).unwrap();
    let psd = welch_psd(
        &rec,
        &WelchConfig {
            segment_length: segment,
            overlap_fraction: 0.5,
        },
    )
    .unwrap();
    psd.total_power()[0]
}

/// Gain of the default band-pass at `freq`, edges trimmed.
pub fn filtered_gain_db(freq: f64) -> f64 {
    let spec = FilterSpec::default();
    let x = sine(freq, 1.0, FS, 3000);
    let rec = EegRecording::single("ch", x.clone(), FS).unwrap();
    let y = bandpass_filter(&rec, &spec).unwrap();
    let skip = 300;
    decibels(rms_trimmed(&y.samples()[0], skip) / rms_trimmed(&x, skip))
}

// ---------------------------------------------------------------- evaluation

/// Held-out accuracy of each model on a synthetic problem (100 rows per
/// class, 30% test).
pub fn synthetic_accuracies(separation: f64, seed: u64) -> Vec<(ModelKind, f64)> {
    let ds = generate_synthetic(&SyntheticSpec::new(100, 6, separation, seed)).unwrap();
    let split = stratified_split(&ds, 0.3, 42).unwrap();
    let report = compare_models(&ds, &split, &ModelKind::ALL, &ModelParams::default()).unwrap();
    report.models.iter().map(|m| (m.model, m.metrics.accuracy)).collect()
}
