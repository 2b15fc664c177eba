use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::special::student_t_two_sided_p;
use crate::dataio::{ArtifactPayload, Emotion, LabeledDataset, N_CLASSES};
use crate::error::{Error, Result};

/// Outcome of Welch's unequal-variance two-sample t-test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WelchTest {
    pub t_statistic: f64,
    /// Welch-Satterthwaite degrees of freedom.
    pub degrees_of_freedom: f64,
    /// Two-sided.
    pub p_value: f64,
}

fn mean_var(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

pub fn welch_t_test(a: &[f64], b: &[f64]) -> Result<WelchTest> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "each sample needs at least 2 values, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let (ma, va) = mean_var(a);
    let (mb, vb) = mean_var(b);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (sa, sb) = (va / na, vb / nb);
    let se2 = sa + sb;
    // relative to the data scale, so constant samples with round-off still count as constant
    let scale = ma.abs().max(mb.abs()).max(1e-300);
    if !(se2 > 1e-28 * scale * scale) {
        return Err(Error::DegenerateVariance);
    }
    let t = (ma - mb) / se2.sqrt();
    let df = se2 * se2 / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    Ok(WelchTest {
        t_statistic: t,
        degrees_of_freedom: df,
        p_value: student_t_two_sided_p(t, df),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TTestResult {
    pub feature_name: String,
    pub t_statistic: f64,
    pub degrees_of_freedom: f64,
    pub p_value: f64,
    pub significant: bool,
    /// Both groups were constant; counted as non-significant.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSignificance {
    pub class: Emotion,
    pub significant: usize,
    pub non_significant: usize,
    pub tests: Vec<TTestResult>,
}

/// One-vs-rest significance counts per emotion, with the underlying t-test table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignificanceSummary {
    pub alpha: f64,
    pub n_features: usize,
    pub classes: Vec<ClassSignificance>,
}

impl ArtifactPayload for SignificanceSummary {
    const KIND: &'static str = "significance";
}

impl SignificanceSummary {
    /// Indices of features significant for at least one class.
    pub fn significant_features(&self) -> Vec<usize> {
        (0..self.n_features)
            .filter(|&j| self.classes.iter().any(|c| c.tests[j].significant))
            .collect()
    }
}

/// For each class, test every feature between that class's rows and all other
/// rows; count `p < alpha` as significant.
pub fn significance_summary(dataset: &LabeledDataset, alpha: f64) -> Result<SignificanceSummary> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    let counts = dataset.class_counts();
    for (class, &count) in counts.iter().enumerate() {
        if count < 2 || dataset.n_samples() - count < 2 {
            return Err(Error::ClassTooSmall {
                class,
                count,
                required: 2,
            });
        }
    }
    let x = dataset.features();
    let labels = dataset.labels();
    let classes = (0..N_CLASSES)
        .map(|c| {
            let tests: Vec<TTestResult> = (0..dataset.n_features())
                .into_par_iter()
                .map(|j| {
                    let (mut inside, mut rest) = (Vec::new(), Vec::new());
                    for (r, &l) in labels.iter().enumerate() {
                        if l == c {
                            inside.push(x.get(r, j));
                        } else {
                            rest.push(x.get(r, j));
                        }
                    }
                    let name = dataset.feature_names()[j].clone();
                    match welch_t_test(&inside, &rest) {
                        Ok(t) => Ok(TTestResult {
                            feature_name: name,
                            t_statistic: t.t_statistic,
                            degrees_of_freedom: t.degrees_of_freedom,
                            p_value: t.p_value,
                            significant: t.p_value < alpha,
                            degenerate: false,
                        }),
                        Err(Error::DegenerateVariance) => Ok(TTestResult {
                            feature_name: name,
                            t_statistic: 0.0,
                            degrees_of_freedom: 0.0,
                            p_value: 1.0,
                            significant: false,
                            degenerate: true,
                        }),
                        Err(e) => Err(e),
                    }
                })
                .collect::<Result<_>>()?;
            let significant = tests.iter().filter(|t| t.significant).count();
            Ok(ClassSignificance {
                class: Emotion::from_index(c).expect("three classes"),
                significant,
                non_significant: tests.len() - significant,
                tests,
            })
        })
        .collect::<Result<_>>()?;
    Ok(SignificanceSummary {
        alpha,
        n_features: dataset.n_features(),
        classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_computed_welch() {
        let r = welch_t_test(&[1.0, 2.0, 3.0, 4.0, 5.0], &[2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        assert_eq!(r.t_statistic, -1.0);
        assert_eq!(r.degrees_of_freedom, 8.0);
        assert!(r.p_value > 0.3 && r.p_value < 0.4);
    }

    #[test]
    fn identical_samples() {
        let a = [1.0, 3.0, 2.0, 5.0];
        let r = welch_t_test(&a, &a).unwrap();
        assert_eq!(r.t_statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn both_constant_is_degenerate() {
        assert!(matches!(
            welch_t_test(&[0.0, 0.0, 0.0], &[1.0, 1.0, 1.0]),
            Err(Error::DegenerateVariance)
        ));
    }

    #[test]
    fn one_constant_sample_is_fine() {
        let r = welch_t_test(&[0.0, 0.0, 0.0], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(r.degrees_of_freedom, 2.0);
    }

    #[test]
    fn antisymmetric() {
        let a = [0.1, 0.5, 0.2, 0.9, 0.4];
        let b = [1.1, 0.7, 1.5, 0.3];
        let ab = welch_t_test(&a, &b).unwrap();
        let ba = welch_t_test(&b, &a).unwrap();
        assert_eq!(ab.t_statistic, -ba.t_statistic);
        assert_eq!(ab.p_value, ba.p_value);
    }
}
