//! Benchmark harness: the six embedded reference datasets, experiment
//! configuration and execution, and side-by-side reproduction of the
//! published result tables.

pub mod experiment;
pub mod reproduce;

pub use experiment::{
    diagram_csv, emit_diagram_data, run_experiment, run_experiment_on, EvaluationScale,
    ExperimentConfig, ForecastPair, ModelSpec, RunReport, SeedOutcome,
};
pub use reproduce::{reproduce, MeasureComparison, ReproduceReport, RowComparison, TableSelector};

use crate::error::{ForecastError, Result};
use crate::series::TimeSeries;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Shape and provenance of one embedded dataset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetDescriptor {
    pub name: String,
    pub length: usize,
    pub n_train: usize,
    pub n_test: usize,
    /// Seasonal period, for the seasonal datasets.
    pub period: Option<usize>,
    pub source_citation: String,
}

struct Fixture {
    name: &'static str,
    n_train: usize,
    period: Option<usize>,
    citation: &'static str,
    content: &'static str,
}

static FIXTURES: &[Fixture] = &[
    Fixture {
        name: "lynx",
        n_train: 100,
        period: None,
        citation: "annual Canadian lynx trappings 1821-1934; Elton & Nicholson (1942); R datasets::lynx",
        content: include_str!("fixtures/lynx.txt"),
    },
    Fixture {
        name: "sunspot",
        n_train: 221,
        period: None,
        citation: "Wolf's annual sunspot numbers 1700-1987; SIDC; R datasets::sunspot.year",
        content: include_str!("fixtures/sunspot.txt"),
    },
    Fixture {
        name: "airline",
        n_train: 132,
        period: Some(12),
        citation: "monthly international airline passengers 1949-1960; Box & Jenkins (1970), Series G",
        content: include_str!("fixtures/airline.txt"),
    },
    Fixture {
        name: "qsales",
        n_train: 20,
        period: Some(4),
        citation: "quarterly export sales of a French firm; Makridakis, Wheelwright & Hyndman (1998)",
        content: include_str!("fixtures/qsales.txt"),
    },
    Fixture {
        name: "beer",
        n_train: 24,
        period: Some(4),
        citation: "quarterly U.S. beer production 1975-1982; Wei, series W10 (reconstruction)",
        content: include_str!("fixtures/beer.txt"),
    },
    Fixture {
        name: "deaths",
        n_train: 60,
        period: Some(12),
        citation: "monthly accidental deaths in the USA 1973-1978; Brockwell & Davis (1991); R datasets::USAccDeaths",
        content: include_str!("fixtures/deaths.txt"),
    },
];

/// Names of all embedded datasets, in table order.
pub fn dataset_names() -> Vec<&'static str> {
    FIXTURES.iter().map(|f| f.name).collect()
}

fn fixture(name: &str) -> Result<&'static Fixture> {
    FIXTURES.iter().find(|f| f.name == name).ok_or_else(|| {
        ForecastError::UnknownDataset(format!(
            "{name} (known datasets: {})",
            dataset_names().join(", ")
        ))
    })
}

/// Verify the `# sha256:` header of a fixture against its data lines
/// (each non-comment line trimmed, with a trailing newline).
fn verify_checksum(name: &str, content: &str) -> Result<()> {
    let declared = content
        .lines()
        .find_map(|l| l.trim().strip_prefix("# sha256:"))
        .map(str::trim)
        .ok_or_else(|| ForecastError::ChecksumMismatch {
            name: name.to_string(),
            expected: "a `# sha256:` header".to_string(),
            actual: "none".to_string(),
        })?;
    let mut hasher = Sha256::new();
    for line in content.lines() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        hasher.update(trimmed.as_bytes());
        hasher.update(b"\n");
    }
    let actual = format!("{:x}", hasher.finalize());
    if actual != declared {
        return Err(ForecastError::ChecksumMismatch {
            name: name.to_string(),
            expected: declared.to_string(),
            actual,
        });
    }
    Ok(())
}

/// Load one of the embedded datasets, verifying its checksum and attaching
/// its seasonal period.
pub fn load_dataset(name: &str) -> Result<TimeSeries> {
    let fix = fixture(name)?;
    verify_checksum(name, fix.content)?;
    let series = TimeSeries::parse_str(fix.name, fix.content)?;
    match fix.period {
        Some(p) => series.with_period(p),
        None => Ok(series),
    }
}

/// Descriptor (shape, split, provenance) for one of the embedded datasets.
pub fn descriptor(name: &str) -> Result<DatasetDescriptor> {
    let fix = fixture(name)?;
    let series = TimeSeries::parse_str(fix.name, fix.content)?;
    Ok(DatasetDescriptor {
        name: fix.name.to_string(),
        length: series.len(),
        n_train: fix.n_train,
        n_test: series.len() - fix.n_train,
        period: fix.period,
        source_citation: fix.citation.to_string(),
    })
}
