//! Side-by-side reproduction of the published benchmark tables.
//!
//! Each row reruns one published experiment — same dataset split, model
//! hyper-parameters, and preprocessing — and compares the five reported
//! accuracy measures (MSE, MAD, RMSE, MAPE, Theil's U) against the printed
//! values. Rows covered by an acceptance tolerance also carry a pass/fail
//! gate; the remaining rows are reported for reference only.
//!
//! Neural rows are reproduced as seed-median bands (the published numbers
//! are single unseeded runs); stochastic and SVM rows are deterministic.

use crate::bench::experiment::{
    run_experiment, EvaluationScale, ExperimentConfig, ModelSpec, RunReport,
};
use crate::bench::descriptor;
use crate::error::{ForecastError, Result};
use crate::neural::{NetworkTopology, TrainingConfig};
use crate::stochastic::SarimaOrder;
use crate::transform::{TransformPipeline, TransformStep};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

/// Which result table(s) to rerun.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableSelector {
    T72,
    T73,
    T74,
    T75,
    T76,
    T77,
    All,
}

impl TableSelector {
    fn tables(self) -> &'static [&'static str] {
        match self {
            TableSelector::T72 => &["7.2"],
            TableSelector::T73 => &["7.3"],
            TableSelector::T74 => &["7.4"],
            TableSelector::T75 => &["7.5"],
            TableSelector::T76 => &["7.6"],
            TableSelector::T77 => &["7.7"],
            TableSelector::All => &["7.2", "7.3", "7.4", "7.5", "7.6", "7.7"],
        }
    }
}

impl FromStr for TableSelector {
    type Err = ForecastError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "7.2" => Ok(TableSelector::T72),
            "7.3" => Ok(TableSelector::T73),
            "7.4" => Ok(TableSelector::T74),
            "7.5" => Ok(TableSelector::T75),
            "7.6" => Ok(TableSelector::T76),
            "7.7" => Ok(TableSelector::T77),
            "all" => Ok(TableSelector::All),
            other => Err(ForecastError::InvalidInput(format!(
                "unknown table {other:?} (expected 7.2–7.7 or all)"
            ))),
        }
    }
}

impl fmt::Display for TableSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableSelector::All => write!(f, "all"),
            other => write!(f, "{}", other.tables()[0]),
        }
    }
}

/// Acceptance tolerance attached to a row, when one exists.
#[derive(Debug, Clone, Copy)]
enum Gate {
    None,
    /// Reproduced MAPE within ± `tol_pp` percentage points of the center.
    MapeWithin { center: f64, tol_pp: f64 },
    /// MAPE band plus a relative RMSE band.
    MapeAndRmse {
        mape_center: f64,
        mape_tol_pp: f64,
        rmse_center: f64,
        rmse_rel: f64,
    },
    /// Kernel-system residual at most 1e-8, with an optional MAPE cap.
    SvmFit { mape_cap: Option<f64> },
    /// Seed-median MAPE at most the cap.
    MedianMapeAtMost { cap: f64 },
}

const SVM_RESIDUAL_CAP: f64 = 1e-8;

impl Gate {
    fn judge(self, report: &RunReport) -> (Option<bool>, String) {
        let mape = report.evaluation.mape.unwrap_or(f64::NAN);
        match self {
            Gate::None => (None, "no acceptance gate".to_string()),
            Gate::MapeWithin { center, tol_pp } => {
                let pass = (mape - center).abs() <= tol_pp;
                (
                    Some(pass),
                    format!("MAPE {mape:.6} vs {center:.6} ± {tol_pp:.2}pp"),
                )
            }
            Gate::MapeAndRmse {
                mape_center,
                mape_tol_pp,
                rmse_center,
                rmse_rel,
            } => {
                let rmse = report.evaluation.rmse;
                let mape_ok = (mape - mape_center).abs() <= mape_tol_pp;
                let rmse_ok = (rmse - rmse_center).abs() <= rmse_rel * rmse_center;
                (
                    Some(mape_ok && rmse_ok),
                    format!(
                        "MAPE {mape:.6} vs {mape_center:.6} ± {mape_tol_pp:.2}pp; RMSE {rmse:.6} vs {rmse_center:.6} ± {:.0}%",
                        rmse_rel * 100.0
                    ),
                )
            }
            Gate::SvmFit { mape_cap } => {
                let residual = report.fit_residual.unwrap_or(f64::NAN);
                let residual_ok = residual <= SVM_RESIDUAL_CAP;
                match mape_cap {
                    None => (
                        Some(residual_ok),
                        format!("system residual {residual:.3e} (cap {SVM_RESIDUAL_CAP:.0e})"),
                    ),
                    Some(cap) => {
                        let mape_ok = mape <= cap;
                        (
                            Some(residual_ok && mape_ok),
                            format!(
                                "system residual {residual:.3e} (cap {SVM_RESIDUAL_CAP:.0e}); MAPE {mape:.6} (cap {cap:.6})"
                            ),
                        )
                    }
                }
            }
            Gate::MedianMapeAtMost { cap } => {
                let pass = mape <= cap;
                (
                    Some(pass),
                    format!("seed-median MAPE {mape:.6} (cap {cap:.6})"),
                )
            }
        }
    }
}

struct RowSpec {
    table: &'static str,
    label: &'static str,
    config: ExperimentConfig,
    /// Published values in measure order: MSE, MAD, RMSE, MAPE, Theil's U.
    paper: [f64; 5],
    gate: Gate,
}

const MEASURES: [&str; 5] = ["mse", "mad", "rmse", "mape", "theil_u"];

fn seeds() -> Vec<u64> {
    (1..=10).collect()
}

fn fnn_training() -> TrainingConfig {
    TrainingConfig {
        learning_rate: 0.1,
        epochs: 20_000,
        seed: 0,
        init_half_width: 0.5,
    }
}

fn sann_training() -> TrainingConfig {
    TrainingConfig {
        learning_rate: 0.2,
        epochs: 20_000,
        seed: 0,
        init_half_width: 0.5,
    }
}

fn pipeline(steps: &[TransformStep]) -> TransformPipeline {
    TransformPipeline::from_steps(steps.to_vec())
}

/// The full row catalog in declared table order.
fn rows() -> Result<Vec<RowSpec>> {
    let lynx = descriptor("lynx")?;
    let sunspot = descriptor("sunspot")?;
    let airline = descriptor("airline")?;
    let qsales = descriptor("qsales")?;
    let beer = descriptor("beer")?;
    let deaths = descriptor("deaths")?;

    let tlnn = |lags: &[usize]| ModelSpec::Neural {
        topology: NetworkTopology::Tlnn {
            lags: lags.to_vec(),
            h: 2,
        },
        training: fnn_training(),
    };
    let sann = |s: usize, m: usize| ModelSpec::Neural {
        topology: NetworkTopology::Sann { s, m },
        training: sann_training(),
    };

    let mut out = Vec::new();

    // ----- Table 7.2: lynx, everything on the log10 scale ------------------
    let log10 = [TransformStep::Log10];
    out.push(RowSpec {
        table: "7.2",
        label: "AR(12)",
        config: ExperimentConfig {
            dataset: lynx.clone(),
            model: ModelSpec::ArYuleWalker { p: 12 },
            transform: pipeline(&log10),
            scale: EvaluationScale::Transformed,
            seeds: vec![],
        },
        paper: [0.005123, 0.058614, 0.071577, 1.950160, 0.007479],
        gate: Gate::MapeAndRmse {
            mape_center: 1.950160,
            mape_tol_pp: 0.75,
            rmse_center: 0.071577,
            rmse_rel: 0.30,
        },
    });
    out.push(RowSpec {
        table: "7.2",
        label: "ARMA(12,9)",
        config: ExperimentConfig {
            dataset: lynx.clone(),
            model: ModelSpec::SarimaCss {
                order: SarimaOrder::new(12, 0, 9),
            },
            transform: pipeline(&log10),
            scale: EvaluationScale::Transformed,
            seeds: vec![],
        },
        paper: [0.016533, 0.096895, 0.128581, 3.409039, 0.013402],
        gate: Gate::None,
    });
    out.push(RowSpec {
        table: "7.2",
        label: "ANN(7x5x1)",
        config: ExperimentConfig {
            dataset: lynx.clone(),
            model: ModelSpec::Neural {
                topology: NetworkTopology::Fnn { p: 7, h: 5 },
                training: fnn_training(),
            },
            transform: pipeline(&log10),
            scale: EvaluationScale::Transformed,
            seeds: seeds(),
        },
        paper: [0.012659, 0.066743, 0.112512, 2.392407, 0.017836],
        gate: Gate::None,
    });
    out.push(RowSpec {
        table: "7.2",
        label: "SVM(n=3)",
        config: ExperimentConfig {
            dataset: lynx,
            model: ModelSpec::Svm {
                sigma: 0.8493,
                gamma: 1.4126,
                n: 3,
            },
            transform: pipeline(&log10),
            scale: EvaluationScale::Transformed,
            seeds: vec![],
        },
        paper: [0.052676, 0.173318, 0.229513, 5.811812, 0.023986],
        gate: Gate::SvmFit {
            mape_cap: Some(2.0 * 5.811812),
        },
    });

    // ----- Table 7.3: sunspot, measures on the original scale --------------
    out.push(RowSpec {
        table: "7.3",
        label: "AR(9)",
        config: ExperimentConfig {
            dataset: sunspot.clone(),
            model: ModelSpec::ArYuleWalker { p: 9 },
            transform: TransformPipeline::new(),
            scale: EvaluationScale::Original,
            seeds: vec![],
        },
        paper: [483.561260, 17.628101, 21.990026, 60.042080, 0.003703],
        gate: Gate::None,
    });
    out.push(RowSpec {
        table: "7.3",
        label: "ANN(4x4x1)",
        config: ExperimentConfig {
            dataset: sunspot.clone(),
            model: ModelSpec::Neural {
                topology: NetworkTopology::Fnn { p: 4, h: 4 },
                training: fnn_training(),
            },
            transform: pipeline(&[TransformStep::range_rescale(1.0, 2.0)]),
            scale: EvaluationScale::Original,
            seeds: seeds(),
        },
        paper: [334.173011, 13.116898, 18.280400, 30.498342, 0.003315],
        gate: Gate::None,
    });
    out.push(RowSpec {
        table: "7.3",
        label: "SVM(n=9)",
        config: ExperimentConfig {
            dataset: sunspot,
            model: ModelSpec::Svm {
                sigma: 290.1945,
                gamma: 43.6432,
                n: 9,
            },
            transform: pipeline(&[TransformStep::range_rescale(100.0, 400.0)]),
            scale: EvaluationScale::Original,
            seeds: vec![],
        },
        paper: [792.961254, 18.261674, 28.159568, 40.433136, 0.004236],
        gate: Gate::SvmFit { mape_cap: None },
    });

    // ----- Table 7.4: airline, measures on the original scale --------------
    let airline_sarima = SarimaOrder::seasonal(0, 1, 1, 0, 1, 1, 12);
    let div100 = [TransformStep::scale_divide(100.0)];
    out.push(RowSpec {
        table: "7.4",
        label: "SARIMA(0,1,1)(0,1,1)12",
        config: ExperimentConfig {
            dataset: airline.clone(),
            model: ModelSpec::SarimaCss {
                order: airline_sarima,
            },
            transform: pipeline(&[TransformStep::NaturalLog]),
            scale: EvaluationScale::Original,
            seeds: vec![],
        },
        paper: [189.333893, 10.539463, 13.759865, 2.244234, 0.000060],
        gate: Gate::MapeWithin {
            center: 2.244234,
            tol_pp: 1.0,
        },
    });
    for (label, lags, paper, gate) in [
        (
            "ANN(1,12;2)",
            vec![1usize, 12],
            [285.633562, 15.225263, 16.900697, 3.234460, 0.000074],
            Gate::None,
        ),
        (
            "ANN(1,2,12;2)",
            vec![1, 2, 12],
            [248.794863, 14.159554, 15.773232, 3.025739, 0.000068],
            Gate::MedianMapeAtMost { cap: 5.0 },
        ),
        (
            "ANN(1,12,13;2)",
            vec![1, 12, 13],
            [2532.238561, 41.438166, 50.321353, 8.454268, 0.000232],
            Gate::None,
        ),
    ] {
        out.push(RowSpec {
            table: "7.4",
            label,
            config: ExperimentConfig {
                dataset: airline.clone(),
                model: tlnn(&lags),
                transform: pipeline(&div100),
                scale: EvaluationScale::Original,
                seeds: seeds(),
            },
            paper,
            gate,
        });
    }
    for (label, m, paper) in [
        ("SANN(1)", 1, [676.481142, 24.311987, 26.009251, 5.138674, 0.000118]),
        ("SANN(2)", 2, [275.720525, 11.888831, 16.604834, 2.486088, 0.000071]),
        ("SANN(3)", 3, [556.054822, 17.693719, 23.580815, 3.624587, 0.000098]),
    ] {
        out.push(RowSpec {
            table: "7.4",
            label,
            config: ExperimentConfig {
                dataset: airline.clone(),
                model: sann(12, m),
                transform: pipeline(&div100),
                scale: EvaluationScale::Original,
                seeds: seeds(),
            },
            paper,
            gate: Gate::None,
        });
    }
    out.push(RowSpec {
        table: "7.4",
        label: "SVM(n=35)",
        config: ExperimentConfig {
            dataset: airline,
            model: ModelSpec::Svm {
                sigma: 1.5195e7,
                gamma: 1.2767e10,
                n: 35,
            },
            transform: TransformPipeline::new(),
            scale: EvaluationScale::Original,
            seeds: vec![],
        },
        paper: [176.885301, 10.849932, 13.299823, 2.336608, 0.000057],
        gate: Gate::SvmFit { mape_cap: None },
    });

    // ----- Table 7.5: quarterly sales, measures on the original scale ------
    out.push(RowSpec {
        table: "7.5",
        label: "SARIMA(0,1,1)(0,1,1)4",
        config: ExperimentConfig {
            dataset: qsales.clone(),
            model: ModelSpec::SarimaCss {
                order: SarimaOrder::seasonal(0, 1, 1, 0, 1, 1, 4),
            },
            transform: pipeline(&[TransformStep::NaturalLog]),
            scale: EvaluationScale::Original,
            seeds: vec![],
        },
        paper: [116.126604, 9.740500, 10.776205, 1.335287, 0.000021],
        gate: Gate::MapeWithin {
            center: 1.335287,
            tol_pp: 1.0,
        },
    });
    for (label, m, paper) in [
        ("SANN(1)", 1, [968.677397, 29.368519, 31.123583, 4.172137, 0.000060]),
        ("SANN(2)", 2, [1004.001275, 29.481937, 31.685979, 4.211440, 0.000060]),
        ("SANN(3)", 3, [466.920955, 16.734615, 21.608354, 2.525232, 0.000041]),
    ] {
        out.push(RowSpec {
            table: "7.5",
            label,
            config: ExperimentConfig {
                dataset: qsales.clone(),
                model: sann(4, m),
                transform: pipeline(&div100),
                scale: EvaluationScale::Original,
                seeds: seeds(),
            },
            paper,
            gate: Gate::None,
        });
    }
    out.push(RowSpec {
        table: "7.5",
        label: "SVM(n=10)",
        config: ExperimentConfig {
            dataset: qsales,
            model: ModelSpec::Svm {
                sigma: 1.091e4,
                gamma: 7.5833e10,
                n: 10,
            },
            transform: TransformPipeline::new(),
            scale: EvaluationScale::Original,
            seeds: vec![],
        },
        paper: [1645.392593, 32.921002, 40.563439, 4.902750, 0.000075],
        gate: Gate::SvmFit { mape_cap: None },
    });

    // ----- Table 7.6: beer, measures on the original scale -----------------
    out.push(RowSpec {
        table: "7.6",
        label: "SARIMA(0,1,1)(0,1,1)4",
        config: ExperimentConfig {
            dataset: beer.clone(),
            model: ModelSpec::SarimaCss {
                order: SarimaOrder::seasonal(0, 1, 1, 0, 1, 1, 4),
            },
            transform: pipeline(&[TransformStep::NaturalLog]),
            scale: EvaluationScale::Original,
            seeds: vec![],
        },
        paper: [1.784946, 1.195592, 1.336019, 2.468494, 0.000553],
        gate: Gate::None,
    });
    for (label, m, paper) in [
        ("SANN(1)", 1, [2.448568, 1.307804, 1.564790, 2.630288, 0.000660]),
        ("SANN(2)", 2, [1.868804, 1.144692, 1.367042, 2.364879, 0.000572]),
        ("SANN(3)", 3, [1.810862, 1.076623, 1.345683, 2.325204, 0.000556]),
        ("SANN(4)", 4, [1.409691, 1.015860, 1.187304, 2.072790, 0.000496]),
    ] {
        out.push(RowSpec {
            table: "7.6",
            label,
            config: ExperimentConfig {
                dataset: beer.clone(),
                model: sann(4, m),
                transform: pipeline(&[TransformStep::scale_divide(10.0)]),
                scale: EvaluationScale::Original,
                seeds: seeds(),
            },
            paper,
            gate: Gate::None,
        });
    }
    out.push(RowSpec {
        table: "7.6",
        label: "SVM(n=19)",
        config: ExperimentConfig {
            dataset: beer,
            model: ModelSpec::Svm {
                sigma: 33.1633,
                gamma: 50.3518,
                n: 19,
            },
            transform: TransformPipeline::new(),
            scale: EvaluationScale::Original,
            seeds: vec![],
        },
        paper: [1.511534, 1.020438, 1.229445, 2.187802, 0.000510],
        gate: Gate::SvmFit { mape_cap: None },
    });

    // ----- Table 7.7: deaths, measures on the scale divided by 100 ---------
    let scaled = EvaluationScale::ScaledOriginal { divisor: 100.0 };
    out.push(RowSpec {
        table: "7.7",
        label: "SARIMA(0,1,1)(0,1,1)12",
        config: ExperimentConfig {
            dataset: deaths.clone(),
            model: ModelSpec::SarimaCss {
                order: SarimaOrder::seasonal(0, 1, 1, 0, 1, 1, 12),
            },
            transform: pipeline(&[TransformStep::NaturalLog]),
            scale: scaled,
            seeds: vec![],
        },
        paper: [3.981148, 1.499827, 1.995281, 1.694144, 0.000254],
        gate: Gate::MapeWithin {
            center: 1.694144,
            tol_pp: 1.0,
        },
    });
    out.push(RowSpec {
        table: "7.7",
        label: "SANN(4)",
        config: ExperimentConfig {
            dataset: deaths.clone(),
            model: sann(12, 4),
            transform: pipeline(&div100),
            scale: scaled,
            seeds: seeds(),
        },
        paper: [13.994408, 2.986875, 3.740910, 3.344423, 0.000491],
        gate: Gate::None,
    });
    out.push(RowSpec {
        table: "7.7",
        label: "SVM(n=13)",
        config: ExperimentConfig {
            dataset: deaths,
            model: ModelSpec::Svm {
                sigma: 45.8047,
                gamma: 6.8738,
                n: 13,
            },
            transform: pipeline(&div100),
            scale: scaled,
            seeds: vec![],
        },
        paper: [16.203377, 3.328154, 4.025342, 3.708167, 0.000531],
        gate: Gate::SvmFit { mape_cap: None },
    });

    Ok(out)
}

/// One measure of one row, side by side with the published value.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureComparison {
    pub measure: String,
    pub paper: f64,
    pub reproduced: f64,
    /// Signed relative difference `(reproduced − paper) / |paper|`.
    pub rel_diff: f64,
}

/// One reproduced table row.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RowComparison {
    pub table: String,
    pub row: String,
    pub measures: Vec<MeasureComparison>,
    /// `None` when the row has no acceptance gate.
    pub gate_pass: Option<bool>,
    pub gate_detail: String,
    pub seconds: f64,
}

/// A full reproduction run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReproduceReport {
    pub rows: Vec<RowComparison>,
    pub total_seconds: f64,
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl ReproduceReport {
    /// Comparison table as CSV with one line per (row, measure).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("table,row,measure,paper,reproduced,rel_diff,pass\n");
        for row in &self.rows {
            let pass = match row.gate_pass {
                Some(true) => "true",
                Some(false) => "false",
                None => "-",
            };
            for m in &row.measures {
                out.push_str(&format!(
                    "{},{},{},{:.6},{:.6},{:.6},{}\n",
                    csv_field(&row.table),
                    csv_field(&row.row),
                    m.measure,
                    m.paper,
                    m.reproduced,
                    m.rel_diff,
                    pass
                ));
            }
        }
        out
    }

    /// One human-readable line per row (status, identity, MAPE comparison).
    pub fn render_summary(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let status = match row.gate_pass {
                Some(true) => "PASS",
                Some(false) => "FAIL",
                None => "----",
            };
            let mape = row
                .measures
                .iter()
                .find(|m| m.measure == "mape")
                .map(|m| format!("MAPE {:.6} vs published {:.6}", m.reproduced, m.paper))
                .unwrap_or_default();
            out.push_str(&format!(
                "[{status}] table {} {:<24} {mape} | {} ({:.2}s)\n",
                row.table, row.row, row.gate_detail, row.seconds
            ));
        }
        out.push_str(&format!("total wall clock: {:.2}s\n", self.total_seconds));
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Gated rows that did not meet their tolerance.
    pub fn failed_rows(&self) -> Vec<String> {
        self.rows
            .iter()
            .filter(|r| r.gate_pass == Some(false))
            .map(|r| format!("{} {}", r.table, r.row))
            .collect()
    }

    /// Error with exit-code semantics when any gated row failed.
    pub fn check(&self) -> Result<()> {
        let total = self.rows.iter().filter(|r| r.gate_pass.is_some()).count();
        let failed = self.failed_rows();
        if failed.is_empty() {
            Ok(())
        } else {
            Err(ForecastError::CheckFailed {
                failed: failed.len(),
                total,
            })
        }
    }
}

fn five_measures(report: &RunReport) -> [f64; 5] {
    let e = &report.evaluation;
    [
        e.mse,
        e.mae,
        e.rmse,
        e.mape.unwrap_or(f64::NAN),
        e.theil_u.unwrap_or(f64::NAN),
    ]
}

/// Rerun the requested published table(s) and compare row by row.
pub fn reproduce(selector: TableSelector) -> Result<ReproduceReport> {
    let started = Instant::now();
    let wanted = selector.tables();
    let mut rows_out = Vec::new();
    for spec in rows()? {
        if !wanted.contains(&spec.table) {
            continue;
        }
        let row_started = Instant::now();
        let report = run_experiment(&spec.config)?;
        let reproduced = five_measures(&report);
        let measures = MEASURES
            .iter()
            .zip(spec.paper.iter().zip(reproduced.iter()))
            .map(|(name, (paper, rep))| MeasureComparison {
                measure: name.to_string(),
                paper: *paper,
                reproduced: *rep,
                rel_diff: (rep - paper) / paper.abs(),
            })
            .collect();
        let (gate_pass, gate_detail) = spec.gate.judge(&report);
        rows_out.push(RowComparison {
            table: spec.table.to_string(),
            row: spec.label.to_string(),
            measures,
            gate_pass,
            gate_detail,
            seconds: row_started.elapsed().as_secs_f64(),
        });
    }
    Ok(ReproduceReport {
        rows: rows_out,
        total_seconds: started.elapsed().as_secs_f64(),
    })
}
