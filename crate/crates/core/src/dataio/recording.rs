use std::collections::HashSet;
use std::fs::File;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::dataset::parse_cell;
use crate::error::{Error, Result};

/// Multi-channel EEG time series. `samples[c]` holds channel `c` in microvolts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EegRecording {
    channels: Vec<String>,
    samples: Vec<Vec<f64>>,
    sampling_rate: f64,
}

impl EegRecording {
    pub fn new(channels: Vec<String>, samples: Vec<Vec<f64>>, sampling_rate: f64) -> Result<Self> {
        if !(sampling_rate > 0.0) || !sampling_rate.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "sampling rate must be positive, got {sampling_rate}"
            )));
        }
        if channels.len() != samples.len() {
            return Err(Error::DimensionMismatch {
                expected: channels.len(),
                found: samples.len(),
            });
        }
        let mut seen = HashSet::new();
        for name in &channels {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateName(name.clone()));
            }
        }
        if let Some(first) = samples.first() {
            if let Some(bad) = samples.iter().find(|s| s.len() != first.len()) {
                return Err(Error::DimensionMismatch {
                    expected: first.len(),
                    found: bad.len(),
                });
            }
        }
        Ok(Self {
            channels,
            samples,
            sampling_rate,
        })
    }

    /// Single-channel convenience constructor, mostly for tests and examples.
    pub fn single(name: &str, samples: Vec<f64>, sampling_rate: f64) -> Result<Self> {
        Self::new(vec![name.to_owned()], vec![samples], sampling_rate)
    }

    pub fn channels(&self) -> &[String] {
        &self.channels
    }

    pub fn channel(&self, idx: usize) -> &[f64] {
        &self.samples[idx]
    }

    pub fn samples(&self) -> &[Vec<f64>] {
        &self.samples
    }

    pub fn sampling_rate(&self) -> f64 {
        self.sampling_rate
    }

    pub fn n_channels(&self) -> usize {
        self.channels.len()
    }

    pub fn n_samples(&self) -> usize {
        self.samples.first().map_or(0, Vec::len)
    }

    pub fn duration_seconds(&self) -> f64 {
        self.n_samples() as f64 / self.sampling_rate
    }

    /// Copy of samples `[start, end)` of every channel.
    pub fn slice(&self, start: usize, end: usize) -> EegRecording {
        EegRecording {
            channels: self.channels.clone(),
            samples: self.samples.iter().map(|s| s[start..end].to_vec()).collect(),
            sampling_rate: self.sampling_rate,
        }
    }

    pub(crate) fn with_samples(&self, samples: Vec<Vec<f64>>, sampling_rate: f64) -> EegRecording {
        EegRecording {
            channels: self.channels.clone(),
            samples,
            sampling_rate,
        }
    }
}

/// Load a raw EEG CSV: one column per channel (header = channel names), one row
/// per sample. The channel count comes from the header.
pub fn load_raw_eeg(path: impl AsRef<Path>, sampling_rate: f64) -> Result<EegRecording> {
    let path = path.as_ref();
    if !path.exists() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_raw_eeg(file, sampling_rate)
}

pub fn read_raw_eeg(reader: impl std::io::Read, sampling_rate: f64) -> Result<EegRecording> {
    if !(sampling_rate > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "sampling rate must be positive, got {sampling_rate}"
        )));
    }
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::Csv(e.to_string()))?
        .iter()
        .map(|h| h.trim().to_owned())
        .collect();
    if header.is_empty() || header.iter().all(String::is_empty) {
        return Err(Error::EmptyInput("eeg csv has no header".into()));
    }
    let mut samples = vec![Vec::new(); header.len()];
    for (row_idx, record) in rdr.records().enumerate() {
        let row = row_idx + 1;
        let record = record.map_err(|e| Error::Csv(e.to_string()))?;
        if record.len() != header.len() {
            return Err(Error::RaggedRow {
                row,
                expected: header.len(),
                found: record.len(),
            });
        }
        for (c, cell) in record.iter().enumerate() {
            samples[c].push(parse_cell(cell, row, &header[c])?);
        }
    }
    if samples[0].is_empty() {
        return Err(Error::EmptyInput("eeg csv has no sample rows".into()));
    }
    EegRecording::new(header, samples, sampling_rate)
}
