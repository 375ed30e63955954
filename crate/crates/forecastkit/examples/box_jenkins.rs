//! The full iterative model-building loop on the airline passengers series:
//! stabilize the variance, check stationarity, search a candidate grid by
//! information criterion, verify the residuals look like white noise, and
//! only then forecast.
//!
//! Run with `cargo run --release --example box_jenkins`.

use forecastkit::diagnostics::dickey_fuller;
use forecastkit::stochastic::{box_jenkins_search, forecast, Criterion, SarimaOrder};
use forecastkit::transform::{TransformPipeline, TransformStep};
use forecastkit::{Result, TimeSeries};

fn main() -> Result<()> {
    let series = forecastkit::bench::load_dataset("airline")?;
    let (train, test) = series.split(132)?;

    // Step 1: variance stabilization, then difference until stationary.
    let mut pipeline = TransformPipeline::from_steps(vec![TransformStep::NaturalLog]);
    let logged = pipeline.apply(&train.values)?;
    let raw_verdict = dickey_fuller(&logged)?;
    println!(
        "ln(train): test statistic {:.2} vs {:.2} -> {}",
        raw_verdict.test_statistic,
        raw_verdict.critical_value,
        if raw_verdict.stationary { "stationary" } else { "needs differencing" }
    );

    // Step 2: candidate orders around the differencing the test suggested.
    let mut grid = Vec::new();
    for p in 0..=1 {
        for q in 0..=1 {
            for sp in 0..=1 {
                for sq in 0..=1 {
                    grid.push(SarimaOrder::seasonal(p, 1, q, sp, 1, sq, 12));
                }
            }
        }
    }
    let log_train = TimeSeries::new("ln(airline[..132])", logged).with_period(12)?;
    let outcome = box_jenkins_search(&log_train, &grid, Criterion::Bic)?;
    println!(
        "selected SARIMA{} with BIC {:.2} (AIC {:.2}, {} parameters)",
        outcome.model.order,
        outcome.score.bic,
        outcome.score.aic,
        outcome.score.n_params,
    );
    println!(
        "residual whiteness: {}/{} autocorrelations outside the band -> {}",
        outcome.diagnostics.n_outside,
        outcome.diagnostics.n_checked,
        if outcome.diagnostics.pass { "pass" } else { "fail" },
    );

    // Step 3: forecast the held-out year and undo the log.
    let ahead = forecast(&outcome.model, &log_train, test.len())?;
    let restored = pipeline.invert(&ahead)?;
    println!("\n month  actual  forecast");
    for (k, (a, f)) in test.values.iter().zip(&restored).enumerate() {
        println!("  {:>4}  {a:>6.0}  {f:>8.1}", 133 + k);
    }
    let eval = forecastkit::metrics::evaluate(&test.values, &restored)?;
    println!(
        "\n12-step-ahead accuracy: MAPE {:.2}%  RMSE {:.1}",
        eval.mape.unwrap_or(f64::NAN),
        eval.rmse,
    );
    Ok(())
}
