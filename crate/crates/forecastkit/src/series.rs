//! Univariate time series container and plain-text I/O.
//!
//! The on-disk format is one observation per line; blank lines and lines
//! starting with `#` are ignored. This matches the embedded dataset fixtures
//! and is trivial to produce from a spreadsheet export.

use crate::error::{ForecastError, Result};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// A named sequence of equally spaced observations, optionally tagged with a
/// seasonal period (12 for monthly data, 4 for quarterly data).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    /// Human-readable identifier (dataset name or file stem).
    pub label: String,
    /// Observations in time order.
    pub values: Vec<f64>,
    /// Seasonal period, when the data has one (`2 ≤ s ≤ len`).
    #[serde(default)]
    pub period: Option<usize>,
}

impl TimeSeries {
    /// Wrap a vector of observations.
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Self {
        TimeSeries {
            label: label.into(),
            values,
            period: None,
        }
    }

    /// Attach a seasonal period.
    pub fn with_period(mut self, period: usize) -> Result<Self> {
        if period < 2 || period > self.values.len() {
            return Err(ForecastError::InvalidInput(format!(
                "period {period} must satisfy 2 ≤ period ≤ series length {}",
                self.values.len()
            )));
        }
        self.period = Some(period);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Arithmetic mean of the observations.
    pub fn mean(&self) -> f64 {
        if self.values.is_empty() {
            return f64::NAN;
        }
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Split into a training prefix of `n_train` points and the remaining
    /// test suffix. Together the parts reproduce the input in order.
    pub fn split(&self, n_train: usize) -> Result<(TimeSeries, TimeSeries)> {
        if n_train == 0 || n_train >= self.values.len() {
            return Err(ForecastError::InvalidInput(format!(
                "cannot split a series of length {} at {}",
                self.values.len(),
                n_train
            )));
        }
        let mut train = TimeSeries::new(
            format!("{}[..{}]", self.label, n_train),
            self.values[..n_train].to_vec(),
        );
        let mut test = TimeSeries::new(
            format!("{}[{}..]", self.label, n_train),
            self.values[n_train..].to_vec(),
        );
        train.period = self.period.filter(|p| *p <= train.values.len());
        test.period = self.period.filter(|p| *p <= test.values.len());
        Ok((train, test))
    }

    /// Parse the one-value-per-line format from a string.
    pub fn parse_str(label: impl Into<String>, content: &str) -> Result<TimeSeries> {
        let mut values = Vec::new();
        for (idx, line) in content.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let v: f64 = trimmed.parse().map_err(|_| ForecastError::Parse {
                line: idx + 1,
                message: format!("expected a number, found {trimmed:?}"),
            })?;
            if !v.is_finite() {
                return Err(ForecastError::Parse {
                    line: idx + 1,
                    message: "non-finite value".into(),
                });
            }
            values.push(v);
        }
        Ok(TimeSeries::new(label, values))
    }

    /// Read a series from a file, labeling it after the file stem.
    pub fn read_from_path(path: impl AsRef<Path>) -> Result<TimeSeries> {
        let path = path.as_ref();
        let content = std::fs::read_to_string(path)?;
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "series".to_string());
        TimeSeries::parse_str(label, &content)
    }

    /// Write the one-value-per-line format, with the label as a comment header.
    pub fn write_to_path(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut out = format!("# {}\n", self.label);
        for v in &self.values {
            out.push_str(&format!("{v}\n"));
        }
        std::fs::write(path, out)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_values_skipping_comments_and_blanks() {
        let text = "# header\n1.5\n\n  2.5 \n# trailing\n-3\n";
        let s = TimeSeries::parse_str("t", text).unwrap();
        assert_eq!(s.values, vec![1.5, 2.5, -3.0]);
    }

    #[test]
    fn reports_parse_errors_with_line_numbers() {
        let text = "1.0\nnot-a-number\n3.0\n";
        match TimeSeries::parse_str("t", text) {
            Err(ForecastError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_non_finite_values() {
        assert!(TimeSeries::parse_str("t", "1.0\ninf\n").is_err());
        assert!(TimeSeries::parse_str("t", "NaN\n").is_err());
    }

    #[test]
    fn split_partitions_without_overlap() {
        let s = TimeSeries::new("t", (0..10).map(f64::from).collect());
        let (train, test) = s.split(7).unwrap();
        assert_eq!(train.len(), 7);
        assert_eq!(test.len(), 3);
        assert_eq!(train.values[6], 6.0);
        assert_eq!(test.values[0], 7.0);
        let rejoined: Vec<f64> = train
            .values
            .iter()
            .chain(test.values.iter())
            .cloned()
            .collect();
        assert_eq!(rejoined, s.values);
        assert!(s.split(0).is_err());
        assert!(s.split(10).is_err());
    }

    #[test]
    fn smallest_split_is_one_and_one() {
        let s = TimeSeries::new("t", vec![1.0, 2.0]);
        let (train, test) = s.split(1).unwrap();
        assert_eq!(train.values, vec![1.0]);
        assert_eq!(test.values, vec![2.0]);
    }

    #[test]
    fn period_is_validated() {
        let s = TimeSeries::new("t", vec![1.0; 12]);
        assert!(s.clone().with_period(1).is_err());
        assert!(s.clone().with_period(13).is_err());
        let s = s.with_period(4).unwrap();
        assert_eq!(s.period, Some(4));
    }

    #[test]
    fn mean_of_known_values() {
        let s = TimeSeries::new("t", vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.mean(), 2.5);
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("series.txt");
        let s = TimeSeries::new("series", vec![1.25, -2.5, 1e-3]);
        s.write_to_path(&path).unwrap();
        let back = TimeSeries::read_from_path(&path).unwrap();
        assert_eq!(back.values, s.values);
        assert_eq!(back.label, "series");
    }
}
