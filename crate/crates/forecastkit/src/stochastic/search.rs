//! Order selection over a candidate grid with residual diagnostics — the
//! identify / estimate / check loop automated.

use super::estimate::{conditional_sse, fit_ar_yule_walker, fit_css, one_step_residuals};
use super::{information_criteria, Criterion, CriterionScore, SarimaModel, SarimaOrder};
use crate::diagnostics::{acf, default_max_lag, CorrelogramResult};
use crate::error::{ForecastError, Result};
use crate::series::TimeSeries;

/// Residual whiteness check for a fitted model.
#[derive(Debug, Clone)]
pub struct DiagnosticReport {
    /// True when at least 95% of the checked residual autocorrelations lie
    /// inside the ±1.96/√m band.
    pub pass: bool,
    /// The residual correlogram that was checked (lag 0 included).
    pub correlogram: CorrelogramResult,
    /// Number of lags checked (⌊m/4⌋ for m residuals).
    pub n_checked: usize,
    /// How many of those fell outside the band.
    pub n_outside: usize,
}

/// Check whether the one-step residuals of `model` on `train` look like
/// white noise: at least 95% of the residual autocorrelations at lags
/// `1..⌊m/4⌋` must lie within ±1.96/√m.
pub fn diagnostic_check(model: &SarimaModel, train: &TimeSeries) -> Result<DiagnosticReport> {
    let mut pipeline = model.pipeline.clone();
    let z = pipeline.apply(&train.values)?;
    let eps = one_step_residuals(&z, model);
    let m = eps.len();
    let max_lag = default_max_lag(m);
    if max_lag == 0 || eps.iter().all(|e| *e == eps[0]) {
        // Too short to check, or an exact fit: nothing contradicts
        // whiteness.
        return Ok(DiagnosticReport {
            pass: true,
            correlogram: CorrelogramResult {
                lags: vec![0],
                values: vec![1.0],
                band: crate::diagnostics::confidence_band(m.max(1)),
            },
            n_checked: 0,
            n_outside: 0,
        });
    }
    let correlogram = acf(&eps, max_lag)?;
    let band = correlogram.band;
    let n_outside = correlogram
        .values
        .iter()
        .skip(1)
        .filter(|v| v.abs() > band)
        .count();
    let pass = (max_lag - n_outside) as f64 >= 0.95 * max_lag as f64;
    Ok(DiagnosticReport {
        pass,
        correlogram,
        n_checked: max_lag,
        n_outside,
    })
}

/// Result of a grid search: the winning model, its criterion score, and the
/// residual diagnostics of that winner.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub model: SarimaModel,
    pub score: CriterionScore,
    pub diagnostics: DiagnosticReport,
}

fn is_pure_ar(order: &SarimaOrder) -> bool {
    order.p > 0
        && order.q == 0
        && order.d == 0
        && order.seasonal_p == 0
        && order.seasonal_d == 0
        && order.seasonal_q == 0
}

/// Fit every candidate order and keep the one with the smallest criterion
/// value. Pure AR candidates go through the Yule-Walker solver, everything
/// else through the conditional sum-of-squares fit. Ties are broken by fewer
/// parameters, then by lexicographically smaller `(p, q, P, Q)` — the
/// parsimony rule. The winner's residuals are diagnostics-checked.
pub fn box_jenkins_search(
    train: &TimeSeries,
    grid: &[SarimaOrder],
    criterion: Criterion,
) -> Result<SearchOutcome> {
    if grid.is_empty() {
        return Err(ForecastError::InvalidInput(
            "order search needs a nonempty candidate grid".into(),
        ));
    }
    let mut failures: Vec<String> = Vec::new();
    let mut best: Option<(f64, usize, (usize, usize, usize, usize), SarimaModel, CriterionScore)> =
        None;
    for order in grid {
        let fitted = if is_pure_ar(order) {
            fit_ar_yule_walker(train, order.p)
        } else {
            fit_css(train, *order)
        };
        let model = match fitted {
            Ok(m) => m,
            Err(e) => {
                failures.push(format!("{order}: {e}"));
                continue;
            }
        };
        let mut pipeline = model.pipeline.clone();
        let z = pipeline.apply(&train.values)?;
        let sse = conditional_sse(&z, &model);
        let n_params =
            model.order.n_coefficients() + usize::from(model.order.includes_constant());
        let score = match information_criteria(z.len(), n_params, sse) {
            Ok(s) => s,
            Err(e) => {
                failures.push(format!("{order}: {e}"));
                continue;
            }
        };
        let key = (
            score.value(criterion),
            n_params,
            (order.p, order.q, order.seasonal_p, order.seasonal_q),
        );
        let replace = match &best {
            None => true,
            Some((v, np, lex, _, _)) => match key.0.total_cmp(v) {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Greater => false,
                std::cmp::Ordering::Equal => (key.1, key.2) < (*np, *lex),
            },
        };
        if replace {
            best = Some((key.0, key.1, key.2, model, score));
        }
    }
    match best {
        Some((_, _, _, model, score)) => {
            let diagnostics = diagnostic_check(&model, train)?;
            Ok(SearchOutcome {
                model,
                score,
                diagnostics,
            })
        }
        None => Err(ForecastError::OptimFailure(format!(
            "every candidate order failed estimation: [{}]",
            failures.join("; ")
        ))),
    }
}
