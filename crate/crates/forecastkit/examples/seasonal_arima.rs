//! Fit the classic seasonal model for the airline passengers series -
//! SARIMA(0,1,1)(0,1,1)_12 on the log scale - and score it two ways: a
//! twelve-step-ahead forecast and rolling one-step predictions over the
//! held-out year.
//!
//! Run with `cargo run --release --example seasonal_arima`.

use forecastkit::stochastic::{fit_css, forecast, SarimaOrder};
use forecastkit::transform::{TransformPipeline, TransformStep};
use forecastkit::{Result, TimeSeries};

fn main() -> Result<()> {
    let series = forecastkit::bench::load_dataset("airline")?;
    let (train, test) = series.split(132)?;

    let mut pipeline = TransformPipeline::from_steps(vec![TransformStep::NaturalLog]);
    let log_train = TimeSeries::new("ln(airline)", pipeline.apply(&train.values)?);

    let order = SarimaOrder::seasonal(0, 1, 1, 0, 1, 1, 12);
    let model = fit_css(&log_train, order)?;
    println!(
        "fitted SARIMA{}: theta = {:.4}, Theta = {:.4}, sigma^2 = {:.6}",
        model.order, model.theta[0], model.seasonal_theta[0], model.sigma2,
    );

    // Multi-step: one forecast origin, twelve steps out.
    let multi = pipeline.invert(&forecast(&model, &log_train, 12)?)?;
    let eval_multi = forecastkit::metrics::evaluate(&test.values, &multi)?;

    // One-step: refit nothing, but roll the origin forward with each
    // observed value, forecasting a single step each time.
    let mut one_step = Vec::with_capacity(test.len());
    for k in 0..test.len() {
        let history = TimeSeries::new("history", series.values[..132 + k].to_vec());
        let log_history = TimeSeries::new(
            "ln(history)",
            history.values.iter().map(|v| v.ln()).collect(),
        );
        let step = forecast(&model, &log_history, 1)?;
        one_step.push(step[0].exp());
    }
    let eval_one = forecastkit::metrics::evaluate(&test.values, &one_step)?;

    println!("\n            multi-step   one-step");
    println!(
        "  MAPE      {:>8.3}%  {:>8.3}%",
        eval_multi.mape.unwrap_or(f64::NAN),
        eval_one.mape.unwrap_or(f64::NAN),
    );
    println!("  RMSE      {:>9.2}  {:>9.2}", eval_multi.rmse, eval_one.rmse);
    println!(
        "  Theil U   {:>9.4}  {:>9.4}",
        eval_multi.theil_u.unwrap_or(f64::NAN),
        eval_one.theil_u.unwrap_or(f64::NAN),
    );

    // The model serializes to a flat JSON document for storage.
    let json = model.to_json()?;
    let restored = forecastkit::stochastic::SarimaModel::from_json(&json)?;
    assert_eq!(restored.theta, model.theta);
    println!("\nmodel JSON round-trips ({} bytes)", json.len());
    Ok(())
}
