//! Seeded three-class Gaussian datasets used as classifier test oracles.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::dataset::{LabeledDataset, N_CLASSES};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub n_per_class: usize,
    pub n_features: usize,
    /// Distance between class means, in units of the within-class standard deviation.
    pub class_separation: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn new(n_per_class: usize, n_features: usize, class_separation: f64, seed: u64) -> Self {
        Self {
            n_per_class,
            n_features,
            class_separation,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_per_class < 2 {
            return Err(Error::InvalidParameter("n_per_class must be >= 2".into()));
        }
        if self.n_features < 1 {
            return Err(Error::InvalidParameter("n_features must be >= 1".into()));
        }
        if !(self.class_separation >= 0.0) || !self.class_separation.is_finite() {
            return Err(Error::InvalidParameter(
                "class_separation must be finite and >= 0".into(),
            ));
        }
        Ok(())
    }
}

/// Class means, centred on the origin.
///
/// With three or more features every coordinate is "owned" by one class
/// (coordinate `j` by class `j % 3`), and each class's coordinates get height
/// `s / sqrt(2 k_c)` where `k_c` is how many it owns. All pairwise distances are
/// then exactly `s`, and every coordinate separates every class from the other
/// two. Two features use an equilateral triangle rotated 15 degrees so no
/// coordinate is degenerate. One feature cannot hold three equidistant points;
/// the means sit at `-s, 0, s`.
pub fn class_means(n_features: usize, separation: f64) -> Vec<Vec<f64>> {
    let s = separation;
    let mut means = vec![vec![0.0; n_features]; N_CLASSES];
    match n_features {
        1 => {
            means[0][0] = -s;
            means[2][0] = s;
        }
        2 => {
            let r = s / 3f64.sqrt();
            for (c, m) in means.iter_mut().enumerate() {
                let theta = (15.0 + 120.0 * c as f64).to_radians();
                m[0] = r * theta.cos();
                m[1] = r * theta.sin();
            }
        }
        d => {
            let mut owned = [0usize; N_CLASSES];
            for j in 0..d {
                owned[j % N_CLASSES] += 1;
            }
            for j in 0..d {
                let c = j % N_CLASSES;
                means[c][j] = s / (2.0 * owned[c] as f64).sqrt();
            }
            for j in 0..d {
                let centroid = means.iter().map(|m| m[j]).sum::<f64>() / N_CLASSES as f64;
                for m in means.iter_mut() {
                    m[j] -= centroid;
                }
            }
        }
    }
    means
}

/// Draw `3 * n_per_class` rows, class by class, from isotropic unit-variance
/// Gaussians around [`class_means`]. Pure function of the spec.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<LabeledDataset> {
    spec.validate()?;
    let means = class_means(spec.n_features, spec.class_separation);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = N_CLASSES * spec.n_per_class;
    let mut data = Vec::with_capacity(n * spec.n_features);
    let mut labels = Vec::with_capacity(n);
    for (c, mean) in means.iter().enumerate() {
        for _ in 0..spec.n_per_class {
            for &m in mean {
                let z: f64 = StandardNormal.sample(&mut rng);
                data.push(m + z);
            }
            labels.push(c);
        }
    }
    let names = (0..spec.n_features).map(|j| format!("x{j}")).collect();
    LabeledDataset::new(Matrix::from_vec(n, spec.n_features, data)?, names, labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::squared_distance;

    #[test]
    fn means_are_equidistant() {
        for d in 2..9 {
            let m = class_means(d, 10.0);
            for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                let dist = squared_distance(&m[a], &m[b]).sqrt();
                assert!((dist - 10.0).abs() < 1e-9, "d={d} pair=({a},{b}) dist={dist}");
            }
        }
    }

    #[test]
    fn every_coordinate_separates_each_class_from_the_rest() {
        for d in 2..9 {
            let m = class_means(d, 1.0);
            for j in 0..d {
                for c in 0..3 {
                    let rest: f64 = (0..3).filter(|&k| k != c).map(|k| m[k][j]).sum::<f64>() / 2.0;
                    assert!((m[c][j] - rest).abs() > 0.1, "d={d} j={j} c={c}");
                }
            }
        }
    }

    #[test]
    fn shape_and_determinism() {
        let spec = SyntheticSpec::new(50, 4, 0.0, 7);
        let a = generate_synthetic(&spec).unwrap();
        let b = generate_synthetic(&spec).unwrap();
        assert_eq!(a.n_samples(), 150);
        assert_eq!(a.class_counts(), [50, 50, 50]);
        assert_eq!(a, b);
        let other = generate_synthetic(&SyntheticSpec { seed: 8, ..spec }).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn invalid_specs() {
        assert!(generate_synthetic(&SyntheticSpec::new(1, 4, 1.0, 0)).is_err());
        assert!(generate_synthetic(&SyntheticSpec::new(5, 0, 1.0, 0)).is_err());
        assert!(generate_synthetic(&SyntheticSpec::new(5, 2, -1.0, 0)).is_err());
    }
}
