use serde::{Deserialize, Serialize};

use crate::dataio::EegRecording;
use crate::error::{Error, Result};

/// Window length and the start offsets of the window streams.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WindowPlan {
    pub window_seconds: f64,
    pub offsets_seconds: Vec<f64>,
}

impl Default for WindowPlan {
    fn default() -> Self {
        Self {
            window_seconds: 1.0,
            offsets_seconds: vec![0.0, 0.5],
        }
    }
}

impl WindowPlan {
    fn validate(&self) -> Result<()> {
        if !(self.window_seconds > 0.0) {
            return Err(Error::InvalidParameter("window length must be positive".into()));
        }
        if let Some(o) = self
            .offsets_seconds
            .iter()
            .find(|&&o| !(0.0..self.window_seconds).contains(&o))
        {
            return Err(Error::InvalidParameter(format!(
                "window offset {o} outside [0, {})",
                self.window_seconds
            )));
        }
        Ok(())
    }
}

/// A window cut from a recording, tagged with the stream it belongs to.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowSegment {
    pub offset_seconds: f64,
    pub start_seconds: f64,
    pub data: EegRecording,
}

/// Non-overlapping windows per offset stream, partial trailing windows dropped.
/// Output is ordered by offset (in plan order), then start time.
pub fn sliding_windows(recording: &EegRecording, plan: &WindowPlan) -> Result<Vec<WindowSegment>> {
    plan.validate()?;
    let fs = recording.sampling_rate();
    let n = recording.n_samples();
    let win = (plan.window_seconds * fs).round() as usize;
    if win == 0 || n < win {
        return Err(Error::SignalTooShort { len: n, min: win });
    }
    let mut out = Vec::new();
    for &offset in &plan.offsets_seconds {
        let mut start = (offset * fs).round() as usize;
        while start + win <= n {
            out.push(WindowSegment {
                offset_seconds: offset,
                start_seconds: start as f64 / fs,
                data: recording.slice(start, start + win),
            });
            start += win;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(seconds: f64, fs: f64) -> EegRecording {
        let n = (seconds * fs).round() as usize;
        EegRecording::single("TP9", (0..n).map(|i| i as f64).collect(), fs).unwrap()
    }

    #[test]
    fn three_seconds_two_offsets() {
        let w = sliding_windows(&rec(3.0, 150.0), &WindowPlan::default()).unwrap();
        let starts: Vec<(f64, f64)> = w.iter().map(|s| (s.offset_seconds, s.start_seconds)).collect();
        assert_eq!(starts, vec![(0.0, 0.0), (0.0, 1.0), (0.0, 2.0), (0.5, 0.5), (0.5, 1.5)]);
        assert!(w.iter().all(|s| s.data.n_samples() == 150));
        assert_eq!(w[3].data.channel(0)[0], 75.0);
    }

    #[test]
    fn exactly_one_window() {
        let plan = WindowPlan {
            window_seconds: 1.0,
            offsets_seconds: vec![0.0],
        };
        assert_eq!(sliding_windows(&rec(1.0, 150.0), &plan).unwrap().len(), 1);
    }

    #[test]
    fn shorter_than_window_errors() {
        assert!(matches!(
            sliding_windows(&rec(0.9, 150.0), &WindowPlan::default()),
            Err(Error::SignalTooShort { .. })
        ));
    }

    #[test]
    fn offsets_must_lie_inside_window() {
        let plan = WindowPlan {
            window_seconds: 1.0,
            offsets_seconds: vec![1.0],
        };
        assert!(sliding_windows(&rec(3.0, 150.0), &plan).is_err());
    }
}
