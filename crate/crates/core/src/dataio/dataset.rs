use std::collections::HashSet;
use std::fs::File;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Number of emotion classes handled by the pipeline.
pub const N_CLASSES: usize = 3;

/// Emotion classes. The integer encoding is fixed: Negative=0, Neutral=1, Positive=2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Emotion {
    Negative,
    Neutral,
    Positive,
}

impl Emotion {
    pub const ALL: [Emotion; N_CLASSES] = [Emotion::Negative, Emotion::Neutral, Emotion::Positive];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Emotion> {
        Self::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            Emotion::Negative => "NEGATIVE",
            Emotion::Neutral => "NEUTRAL",
            Emotion::Positive => "POSITIVE",
        }
    }

    /// Accepts class names case-insensitively, or the integer codes 0/1/2.
    pub fn parse(raw: &str) -> Option<Emotion> {
        let s = raw.trim();
        Self::ALL
            .iter()
            .copied()
            .find(|e| e.name().eq_ignore_ascii_case(s))
            .or(match s {
                "0" => Some(Emotion::Negative),
                "1" => Some(Emotion::Neutral),
                "2" => Some(Emotion::Positive),
                _ => None,
            })
    }
}

/// Feature matrix with one integer emotion label per row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledDataset {
    features: Matrix,
    feature_names: Vec<String>,
    labels: Vec<usize>,
}

impl LabeledDataset {
    pub fn new(features: Matrix, feature_names: Vec<String>, labels: Vec<usize>) -> Result<Self> {
        if feature_names.len() != features.cols() {
            return Err(Error::DimensionMismatch {
                expected: features.cols(),
                found: feature_names.len(),
            });
        }
        if labels.len() != features.rows() {
            return Err(Error::DimensionMismatch {
                expected: features.rows(),
                found: labels.len(),
            });
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= N_CLASSES) {
            return Err(Error::LabelOutOfRange(bad));
        }
        let mut seen = HashSet::new();
        for name in &feature_names {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateName(name.clone()));
            }
        }
        if !features.all_finite() {
            return Err(Error::InvalidParameter(
                "feature matrix contains NaN or infinite values".into(),
            ));
        }
        Ok(Self {
            features,
            feature_names,
            labels,
        })
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn n_samples(&self) -> usize {
        self.features.rows()
    }

    pub fn n_features(&self) -> usize {
        self.features.cols()
    }

    /// Per-class row counts, indexed by label.
    pub fn class_counts(&self) -> [usize; N_CLASSES] {
        let mut counts = [0; N_CLASSES];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    pub fn subset(&self, rows: &[usize]) -> LabeledDataset {
        LabeledDataset {
            features: self.features.select_rows(rows),
            feature_names: self.feature_names.clone(),
            labels: rows.iter().map(|&r| self.labels[r]).collect(),
        }
    }

    pub fn select_features(&self, cols: &[usize]) -> LabeledDataset {
        LabeledDataset {
            features: self.features.select_columns(cols),
            feature_names: cols.iter().map(|&c| self.feature_names[c].clone()).collect(),
            labels: self.labels.clone(),
        }
    }

    /// Same labels and names, new feature values (e.g. after standardization).
    pub fn with_features(&self, features: Matrix) -> Result<LabeledDataset> {
        LabeledDataset::new(features, self.feature_names.clone(), self.labels.clone())
    }
}

/// Load a feature CSV (header row required). `label_column` is removed from the
/// feature set and encoded as 0/1/2; the remaining columns keep their order.
pub fn load_feature_dataset(path: impl AsRef<Path>, label_column: &str) -> Result<LabeledDataset> {
    let path = path.as_ref();
    if !path.exists() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_feature_csv(file, label_column)
}

pub fn read_feature_csv(reader: impl std::io::Read, label_column: &str) -> Result<LabeledDataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::Csv(e.to_string()))?
        .iter()
        .map(str::to_owned)
        .collect();
    if header.is_empty() || (header.len() == 1 && header[0].is_empty()) {
        return Err(Error::EmptyInput("feature csv has no header".into()));
    }
    let label_idx = header
        .iter()
        .position(|h| h == label_column)
        .ok_or_else(|| Error::MissingLabelColumn(label_column.to_owned()))?;
    let feature_cols: Vec<usize> = (0..header.len()).filter(|&i| i != label_idx).collect();
    let feature_names: Vec<String> = feature_cols.iter().map(|&i| header[i].clone()).collect();

    let mut values = Vec::new();
    let mut labels = Vec::new();
    for (row_idx, record) in rdr.records().enumerate() {
        // Row numbers are 1-based data rows (the header is row 0).
        let row = row_idx + 1;
        let record = record.map_err(|e| Error::Csv(e.to_string()))?;
        if record.len() != header.len() {
            return Err(Error::RaggedRow {
                row,
                expected: header.len(),
                found: record.len(),
            });
        }
        let raw_label = &record[label_idx];
        let label = Emotion::parse(raw_label).ok_or_else(|| Error::UnknownLabel {
            row,
            value: raw_label.to_owned(),
        })?;
        labels.push(label.index());
        for &c in &feature_cols {
            values.push(parse_cell(&record[c], row, &header[c])?);
        }
    }
    if labels.is_empty() {
        return Err(Error::EmptyInput("feature csv has no data rows".into()));
    }
    let features = Matrix::from_vec(labels.len(), feature_cols.len(), values)?;
    LabeledDataset::new(features, feature_names, labels)
}

pub(crate) fn parse_cell(raw: &str, row: usize, column: &str) -> Result<f64> {
    let v: f64 = raw.trim().parse().map_err(|_| Error::NonNumericCell {
        row,
        column: column.to_owned(),
        value: raw.to_owned(),
    })?;
    if !v.is_finite() {
        return Err(Error::NonFiniteCell {
            row,
            column: column.to_owned(),
        });
    }
    Ok(v)
}

/// Write a dataset as CSV: feature columns followed by a `label` column holding
/// class names. Values use shortest round-trip formatting, so reading the file
/// back reproduces every value bit for bit.
pub fn write_feature_csv(dataset: &LabeledDataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut wtr = csv::Writer::from_writer(file);
    let mut header: Vec<&str> = dataset.feature_names.iter().map(String::as_str).collect();
    header.push("label");
    wtr.write_record(&header).map_err(|e| Error::Csv(e.to_string()))?;
    for (r, &label) in dataset.labels.iter().enumerate() {
        let mut rec: Vec<String> = dataset.features.row(r).iter().map(|v| v.to_string()).collect();
        rec.push(Emotion::from_index(label).expect("validated label").name().to_owned());
        wtr.write_record(&rec).map_err(|e| Error::Csv(e.to_string()))?;
    }
    wtr.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOY: &str = "f1,f2,label\n1.0,2.0,NEGATIVE\n3.0,4.0,neutral\n5.0,6.0,Positive\n";

    #[test]
    fn toy_csv_encodes_labels() {
        let ds = read_feature_csv(TOY.as_bytes(), "label").unwrap();
        assert_eq!(ds.labels(), &[0, 1, 2]);
        assert_eq!(ds.n_features(), 2);
        assert_eq!(ds.feature_names(), &["f1", "f2"]);
        assert_eq!(ds.class_counts(), [1, 1, 1]);
    }

    #[test]
    fn numeric_labels_accepted() {
        let ds = read_feature_csv("a,label\n1,2\n2,0\n".as_bytes(), "label").unwrap();
        assert_eq!(ds.labels(), &[2, 0]);
    }

    #[test]
    fn label_column_position_is_free() {
        let ds = read_feature_csv("label,x,y\nPOSITIVE,1,2\n".as_bytes(), "label").unwrap();
        assert_eq!(ds.feature_names(), &["x", "y"]);
        assert_eq!(ds.features().row(0), &[1.0, 2.0]);
    }

    #[test]
    fn non_numeric_cell_names_row_and_column() {
        let bad = "f1,f2,label\n1.0,2.0,NEGATIVE\n3.0,abc,NEUTRAL\n";
        match read_feature_csv(bad.as_bytes(), "label") {
            Err(Error::NonNumericCell { row, column, value }) => {
                assert_eq!(row, 2);
                assert_eq!(column, "f2");
                assert_eq!(value, "abc");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn nan_and_inf_are_rejected() {
        for cell in ["NaN", "inf", "-inf"] {
            let csv = format!("f1,label\n{cell},NEGATIVE\n");
            assert!(matches!(
                read_feature_csv(csv.as_bytes(), "label"),
                Err(Error::NonFiniteCell { row: 1, .. })
            ));
        }
    }

    #[test]
    fn unknown_label_and_missing_column() {
        assert!(matches!(
            read_feature_csv("f1,label\n1,HAPPY\n".as_bytes(), "label"),
            Err(Error::UnknownLabel { row: 1, .. })
        ));
        assert!(matches!(
            read_feature_csv("f1,emotion\n1,NEGATIVE\n".as_bytes(), "label"),
            Err(Error::MissingLabelColumn(_))
        ));
    }

    #[test]
    fn missing_file() {
        assert!(matches!(
            load_feature_dataset("/nonexistent/features.csv", "label"),
            Err(Error::MissingFile(_))
        ));
    }

    #[test]
    fn duplicate_feature_names_rejected() {
        assert!(matches!(
            read_feature_csv("a,a,label\n1,2,NEGATIVE\n".as_bytes(), "label"),
            Err(Error::DuplicateName(_))
        ));
    }

    #[test]
    fn label_encoding_is_a_bijection() {
        for e in Emotion::ALL {
            assert_eq!(Emotion::from_index(e.index()), Some(e));
            assert_eq!(Emotion::parse(e.name()), Some(e));
            assert_eq!(Emotion::parse(&e.name().to_lowercase()), Some(e));
        }
    }
}
