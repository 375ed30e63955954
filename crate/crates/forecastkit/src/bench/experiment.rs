//! Experiment configuration and execution: fit one model on one dataset's
//! training span, forecast the test span, and evaluate at the configured
//! scale.
//!
//! Evaluation protocols, recorded per model family:
//! - stochastic models: one-step-ahead static — parameters are fit once on
//!   the training span, then each test point is predicted from the true
//!   history up to it;
//! - neural models: one recursive multi-step forecast per seed, with
//!   per-seed metrics and their elementwise median;
//! - support vector models: iterated one-step predictions where each true
//!   value is added to the sliding window and the oldest point pruned.

use crate::bench::{load_dataset, DatasetDescriptor};
use crate::error::{ForecastError, Result};
use crate::metrics::{evaluate, ForecastEvaluation};
use crate::neural::{self, NetworkTopology, TrainingConfig};
use crate::series::TimeSeries;
use crate::stochastic::{fit_ar_yule_walker, fit_css, SarimaOrder};
use crate::svm::{
    embed, fit_lssvm, rolling_forecast, RbfKernel, RollingMode, WindowConfig,
};
use crate::transform::TransformPipeline;
use serde::{Deserialize, Serialize};
use std::path::Path;
use std::time::Instant;

/// Model family plus its full hyper-parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ModelSpec {
    /// Autoregression of order `p`, estimated from the autocorrelations.
    ArYuleWalker { p: usize },
    /// Seasonal ARIMA estimated by conditional least squares.
    SarimaCss { order: SarimaOrder },
    /// Feedforward / time-lagged / seasonal network.
    Neural {
        topology: NetworkTopology,
        training: TrainingConfig,
    },
    /// Least-squares SVM with an RBF kernel on a spanning window.
    Svm { sigma: f64, gamma: f64, n: usize },
}

impl ModelSpec {
    /// Short human-readable form for report rows and error context.
    pub fn label(&self) -> String {
        match self {
            ModelSpec::ArYuleWalker { p } => format!("AR({p})"),
            ModelSpec::SarimaCss { order } => format!("SARIMA{order}"),
            ModelSpec::Neural { topology, .. } => format!("{topology}"),
            ModelSpec::Svm { sigma, gamma, n } => {
                format!("SVM(sigma={sigma}, gamma={gamma}, n={n})")
            }
        }
    }

    /// Whether this model trains from a random initialization and therefore
    /// needs a seed set.
    pub fn is_neural(&self) -> bool {
        matches!(self, ModelSpec::Neural { .. })
    }
}

/// Scale on which the accuracy measures are computed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scale", rename_all = "snake_case")]
pub enum EvaluationScale {
    /// Invert the preprocessing pipeline and evaluate on the raw data scale.
    Original,
    /// Evaluate on the pipeline's output scale.
    Transformed,
    /// Invert to the raw scale, then divide both actuals and forecasts by a
    /// fixed constant before evaluating.
    ScaledOriginal { divisor: f64 },
}

/// Everything needed to rerun one table row.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub dataset: DatasetDescriptor,
    pub model: ModelSpec,
    /// Preprocessing applied before fitting (differencing for the stochastic
    /// family lives inside the model, not here).
    pub transform: TransformPipeline,
    pub scale: EvaluationScale,
    /// Seeds for the neural family; other families run once and ignore this.
    pub seeds: Vec<u64>,
}

/// One test-span point: the actual observation and its forecast, both on
/// the evaluation scale. `index` is the position in the full series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForecastPair {
    pub index: usize,
    pub actual: f64,
    pub forecast: f64,
}

/// Metrics of a single seeded run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeedOutcome {
    pub seed: u64,
    pub evaluation: ForecastEvaluation,
}

/// Result of running one experiment configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub config: ExperimentConfig,
    /// The forecast protocol the run used (recorded, since published tables
    /// rarely state it).
    pub protocol: String,
    /// Headline metrics: the single run for stochastic/SVM rows, the
    /// elementwise median across seeds for neural rows.
    pub evaluation: ForecastEvaluation,
    /// Per-seed metrics (neural rows only).
    pub per_seed: Vec<SeedOutcome>,
    /// Actual/forecast pairs over the test span (for neural rows, from the
    /// seed with the median absolute percentage error).
    pub pairs: Vec<ForecastPair>,
    /// Relative residual of the fitted kernel system (SVM rows only).
    pub fit_residual: Option<f64>,
    pub wall_clock_seconds: f64,
    pub library_version: String,
}

impl RunReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

fn median_opt(per_seed: &[Option<f64>]) -> Option<f64> {
    let mut vals: Vec<f64> = per_seed.iter().copied().collect::<Option<Vec<_>>>()?;
    Some(median(&mut vals))
}

/// Elementwise median of per-seed evaluations.
fn median_evaluation(evals: &[ForecastEvaluation]) -> ForecastEvaluation {
    let pick = |f: fn(&ForecastEvaluation) -> f64| {
        let mut v: Vec<f64> = evals.iter().map(f).collect();
        median(&mut v)
    };
    let pick_opt = |f: fn(&ForecastEvaluation) -> Option<f64>| {
        let v: Vec<Option<f64>> = evals.iter().map(f).collect();
        median_opt(&v)
    };
    let mut flags: Vec<String> = evals.iter().flat_map(|e| e.flags.clone()).collect();
    flags.sort();
    flags.dedup();
    ForecastEvaluation {
        n: evals[0].n,
        mfe: pick(|e| e.mfe),
        mae: pick(|e| e.mae),
        mape: pick_opt(|e| e.mape),
        mpe: pick_opt(|e| e.mpe),
        mse: pick(|e| e.mse),
        sse: pick(|e| e.sse),
        smse: pick(|e| e.smse),
        rmse: pick(|e| e.rmse),
        nmse: pick_opt(|e| e.nmse),
        theil_u: pick_opt(|e| e.theil_u),
        flags,
    }
}

/// Map transformed-scale forecasts and raw actuals onto the evaluation
/// scale. Returns (actuals, forecasts) on that scale.
fn to_evaluation_scale(
    scale: EvaluationScale,
    pre: &TransformPipeline,
    raw_test: &[f64],
    t_test: &[f64],
    f_trans: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    match scale {
        EvaluationScale::Transformed => Ok((t_test.to_vec(), f_trans.to_vec())),
        EvaluationScale::Original => Ok((raw_test.to_vec(), pre.invert(f_trans)?)),
        EvaluationScale::ScaledOriginal { divisor } => {
            if divisor == 0.0 || !divisor.is_finite() {
                return Err(ForecastError::InvalidInput(
                    "evaluation-scale divisor must be finite and nonzero".into(),
                ));
            }
            let f_orig = pre.invert(f_trans)?;
            Ok((
                raw_test.iter().map(|v| v / divisor).collect(),
                f_orig.iter().map(|v| v / divisor).collect(),
            ))
        }
    }
}

struct Prepared {
    t_train: Vec<f64>,
    t_test: Vec<f64>,
    pre: TransformPipeline,
}

fn prepare(config: &ExperimentConfig, series: &TimeSeries) -> Result<Prepared> {
    if series.len() != config.dataset.length {
        return Err(ForecastError::InvalidInput(format!(
            "dataset {} has {} observations but the descriptor declares {}",
            config.dataset.name,
            series.len(),
            config.dataset.length
        )));
    }
    let (train, test) = series.split(config.dataset.n_train)?;
    let mut pre = config.transform.clone();
    if !pre.is_pointwise() {
        return Err(ForecastError::InvalidInput(
            "experiment preprocessing must be pointwise; differencing belongs to the model order"
                .into(),
        ));
    }
    let t_train = pre.apply(&train.values)?;
    let t_test = pre.reapply(&test.values)?;
    Ok(Prepared {
        t_train,
        t_test,
        pre,
    })
}

/// One-step-ahead static predictions over the test span: the model is fit
/// once, then each prediction conditions on the true (transformed) history
/// up to its time point.
fn one_step_predictions(
    model: &crate::stochastic::SarimaModel,
    label: &str,
    t_train: &[f64],
    t_test: &[f64],
) -> Result<Vec<f64>> {
    let mut preds = Vec::with_capacity(t_test.len());
    let mut history = t_train.to_vec();
    for &truth in t_test {
        let hist = TimeSeries::new(label, history.clone());
        let f = crate::stochastic::forecast(model, &hist, 1)?;
        preds.push(f[0]);
        history.push(truth);
    }
    Ok(preds)
}

/// Run one experiment against an explicitly provided series (which must
/// match the descriptor's length). Use [`run_experiment`] for the embedded
/// datasets.
pub fn run_experiment_on(config: &ExperimentConfig, series: &TimeSeries) -> Result<RunReport> {
    let started = Instant::now();
    let p = prepare(config, series)?;
    let n_train = config.dataset.n_train;
    let n_test = config.dataset.n_test;
    let raw_test = &series.values[n_train..];
    let train_series = TimeSeries::new(format!("{}-train", config.dataset.name), p.t_train.clone());

    let mut per_seed = Vec::new();
    let mut fit_residual = None;
    let protocol;

    // Transformed-scale forecasts for the headline report row.
    let f_trans: Vec<f64> = match &config.model {
        ModelSpec::ArYuleWalker { p: order } => {
            protocol = "one-step-ahead static".to_string();
            let model = fit_ar_yule_walker(&train_series, *order)?;
            one_step_predictions(&model, &train_series.label, &p.t_train, &p.t_test)?
        }
        ModelSpec::SarimaCss { order } => {
            protocol = "one-step-ahead static".to_string();
            let model = fit_css(&train_series, *order)?;
            one_step_predictions(&model, &train_series.label, &p.t_train, &p.t_test)?
        }
        ModelSpec::Svm { sigma, gamma, n } => {
            protocol = "iterated one-step with true-value window updates".to_string();
            let kernel = RbfKernel::new(*sigma)?;
            let window = WindowConfig::spanning(*n, p.t_train.len())?;
            let (inputs, targets) = embed(&train_series, &window)?;
            let fitted = fit_lssvm(&inputs, &targets, *gamma, &kernel)?;
            fit_residual = Some(fitted.system_residual()?);
            rolling_forecast(
                &train_series,
                &window,
                *gamma,
                &kernel,
                n_test,
                RollingMode::Evaluation(&p.t_test),
            )?
        }
        ModelSpec::Neural { topology, training } => {
            protocol = "recursive multi-step, median over seeds".to_string();
            if config.seeds.is_empty() {
                return Err(ForecastError::InvalidInput(
                    "neural experiments need at least one seed".into(),
                ));
            }
            let mut seed_forecasts = Vec::with_capacity(config.seeds.len());
            for &seed in &config.seeds {
                let cfg = TrainingConfig {
                    seed,
                    ..training.clone()
                };
                let net = neural::train(topology, &train_series, &cfg)?;
                let f = neural::forecast(topology, &net.weights, &train_series, n_test)?;
                seed_forecasts.push((seed, f));
            }
            // Evaluate every seed on the configured scale, then keep the
            // median-MAPE seed's forecasts as the representative pairs.
            let mut scored = Vec::with_capacity(seed_forecasts.len());
            for (seed, f) in &seed_forecasts {
                let (a, fc) =
                    to_evaluation_scale(config.scale, &p.pre, raw_test, &p.t_test, f)?;
                let ev = evaluate(&a, &fc)?;
                scored.push((*seed, ev.mape.unwrap_or(ev.rmse), f.clone()));
                per_seed.push(SeedOutcome {
                    seed: *seed,
                    evaluation: ev,
                });
            }
            scored.sort_by(|x, y| x.1.total_cmp(&y.1).then(x.0.cmp(&y.0)));
            let representative = (scored.len() - 1) / 2;
            scored[representative].2.clone()
        }
    };

    let (actuals, forecasts) =
        to_evaluation_scale(config.scale, &p.pre, raw_test, &p.t_test, &f_trans)?;
    let evaluation = if config.model.is_neural() {
        median_evaluation(
            &per_seed
                .iter()
                .map(|s| s.evaluation.clone())
                .collect::<Vec<_>>(),
        )
    } else {
        evaluate(&actuals, &forecasts)?
    };
    let pairs = actuals
        .iter()
        .zip(&forecasts)
        .enumerate()
        .map(|(k, (a, f))| ForecastPair {
            index: n_train + k,
            actual: *a,
            forecast: *f,
        })
        .collect();

    Ok(RunReport {
        config: config.clone(),
        protocol,
        evaluation,
        per_seed,
        pairs,
        fit_residual,
        wall_clock_seconds: started.elapsed().as_secs_f64(),
        library_version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

/// Run one experiment on the embedded dataset named in the config.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunReport> {
    let series = load_dataset(&config.dataset.name)?;
    run_experiment_on(config, &series)
}

/// The comma-separated data behind a forecast diagram.
pub fn diagram_csv(report: &RunReport) -> String {
    let mut out = String::from("index,actual,forecast\n");
    for pair in &report.pairs {
        out.push_str(&format!(
            "{},{:.6},{:.6}\n",
            pair.index, pair.actual, pair.forecast
        ));
    }
    out
}

/// Write the actual-versus-forecast overlay data for a report to `path`.
pub fn emit_diagram_data(report: &RunReport, path: impl AsRef<Path>) -> Result<()> {
    if report.pairs.is_empty() {
        return Err(ForecastError::InvalidInput(
            "report has no forecast pairs to plot".into(),
        ));
    }
    std::fs::write(path.as_ref(), diagram_csv(report))?;
    Ok(())
}
