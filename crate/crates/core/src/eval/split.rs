use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataio::{LabeledDataset, N_CLASSES};
use crate::error::{Error, Result};

pub const DEFAULT_TEST_FRACTION: f64 = 0.3;
pub const DEFAULT_SEED: u64 = 42;

/// Disjoint train / test row indices, each list sorted ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitIndices {
    pub train_rows: Vec<usize>,
    pub test_rows: Vec<usize>,
    pub seed: u64,
    pub test_fraction: f64,
}

impl SplitIndices {
    pub fn n_rows(&self) -> usize {
        self.train_rows.len() + self.test_rows.len()
    }
}

fn rows_by_class(labels: &[usize]) -> [Vec<usize>; N_CLASSES] {
    let mut by_class: [Vec<usize>; N_CLASSES] = Default::default();
    for (r, &l) in labels.iter().enumerate() {
        by_class[l].push(r);
    }
    by_class
}

/// Shuffle each class with one seeded generator (classes visited in index
/// order) and send `round(n_c * test_fraction)` rows of class `c` to test.
pub fn stratified_split(dataset: &LabeledDataset, test_fraction: f64, seed: u64) -> Result<SplitIndices> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "test fraction must lie in (0, 1), got {test_fraction}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train_rows = Vec::new();
    let mut test_rows = Vec::new();
    for (class, mut rows) in rows_by_class(dataset.labels()).into_iter().enumerate() {
        let n = rows.len();
        let n_test = (n as f64 * test_fraction).round() as usize;
        if n_test == 0 || n_test >= n {
            return Err(Error::ClassTooSmall {
                class,
                count: n,
                required: 2,
            });
        }
        rows.shuffle(&mut rng);
        test_rows.extend_from_slice(&rows[..n_test]);
        train_rows.extend_from_slice(&rows[n_test..]);
    }
    train_rows.sort_unstable();
    test_rows.sort_unstable();
    Ok(SplitIndices {
        train_rows,
        test_rows,
        seed,
        test_fraction,
    })
}

/// At most `max_rows` rows, drawn per class in proportion to class size.
/// Returns every row (sorted) when the dataset is already small enough.
pub fn stratified_subsample(dataset: &LabeledDataset, max_rows: usize, seed: u64) -> Vec<usize> {
    let n = dataset.n_samples();
    if n <= max_rows {
        return (0..n).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut keep = Vec::with_capacity(max_rows);
    for mut rows in rows_by_class(dataset.labels()) {
        let take = (rows.len() * max_rows) / n;
        rows.shuffle(&mut rng);
        keep.extend_from_slice(&rows[..take]);
    }
    keep.sort_unstable();
    keep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataio::{generate_synthetic, SyntheticSpec};

    #[test]
    fn thirty_per_class() {
        let ds = generate_synthetic(&SyntheticSpec::new(30, 2, 1.0, 0)).unwrap();
        let s = stratified_split(&ds, 0.3, 42).unwrap();
        assert_eq!(s.test_rows.len(), 27);
        assert_eq!(s.train_rows.len(), 63);
        let test = ds.subset(&s.test_rows);
        assert_eq!(test.class_counts(), [9, 9, 9]);
        assert_eq!(s, stratified_split(&ds, 0.3, 42).unwrap());
        assert_ne!(s.test_rows, stratified_split(&ds, 0.3, 43).unwrap().test_rows);
    }

    #[test]
    fn bad_fraction() {
        let ds = generate_synthetic(&SyntheticSpec::new(10, 2, 1.0, 0)).unwrap();
        assert!(stratified_split(&ds, 0.0, 1).is_err());
        assert!(stratified_split(&ds, 1.0, 1).is_err());
    }

    #[test]
    fn tiny_class() {
        let ds = generate_synthetic(&SyntheticSpec::new(3, 2, 1.0, 0)).unwrap();
        // round(3 * 0.1) = 0 test rows per class
        assert!(matches!(
            stratified_split(&ds, 0.1, 1),
            Err(Error::ClassTooSmall { .. })
        ));
        assert!(matches!(
            stratified_split(&ds, 0.9, 1),
            Err(Error::ClassTooSmall { .. })
        ));
    }

    #[test]
    fn subsample_is_proportional() {
        let ds = generate_synthetic(&SyntheticSpec::new(50, 2, 1.0, 0)).unwrap();
        let rows = stratified_subsample(&ds, 60, 3);
        assert_eq!(rows.len(), 60);
        assert_eq!(ds.subset(&rows).class_counts(), [20, 20, 20]);
        assert_eq!(stratified_subsample(&ds, 500, 3).len(), 150);
    }
}
