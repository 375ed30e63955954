//! Kernel regression that learns online: fit a least-squares SVM on a
//! sliding window of the accidental-deaths series, then advance through the
//! test span by rank-one inverse updates (add the newest point, prune the
//! oldest) instead of refitting from scratch.
//!
//! Run with `cargo run --release --example svm_online`.

use forecastkit::svm::{
    dlssvm_add, dlssvm_prune, embed, fit_lssvm, rolling_forecast, RbfKernel, RollingMode,
    WindowConfig,
};
use forecastkit::transform::{TransformPipeline, TransformStep};
use forecastkit::{Result, TimeSeries};

fn main() -> Result<()> {
    let series = forecastkit::bench::load_dataset("deaths")?;
    let (train, test) = series.split(60)?;

    let mut pipeline = TransformPipeline::from_steps(vec![TransformStep::scale_divide(100.0)]);
    let scaled_train = TimeSeries::new("deaths/100", pipeline.apply(&train.values)?);
    let scaled_test = pipeline.reapply(&test.values)?;

    let kernel = RbfKernel::new(45.8047)?;
    let gamma = 6.8738;
    let config = WindowConfig::spanning(13, scaled_train.len())?;

    // Batch fit on the training span; the bordered kernel system is solved
    // exactly and its inverse kept for the incremental updates.
    let (inputs, targets) = embed(&scaled_train, &config)?;
    let model = fit_lssvm(&inputs, &targets, gamma, &kernel)?;
    println!(
        "batch fit: window {} points, |b| = {:.4}, system residual {:.3e}",
        model.window_len(),
        model.b.abs(),
        model.system_residual()?,
    );

    // One add + prune step by hand, checked against a from-scratch refit.
    let newest: Vec<f64> = scaled_train.values[scaled_train.len() - 13..].to_vec();
    let grown = dlssvm_add(&model, &newest, scaled_test[0])?;
    let slid = dlssvm_prune(&grown)?;
    let refit = fit_lssvm(&slid.inputs, &slid.targets, gamma, &kernel)?;
    let drift = slid
        .alpha
        .iter()
        .zip(&refit.alpha)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0_f64, f64::max);
    println!("after one add+prune cycle: max |alpha - refit alpha| = {drift:.3e}");

    // The rolling driver does this for the whole test span: predict, reveal
    // the true value, slide the window forward.
    let preds = rolling_forecast(
        &scaled_train,
        &config,
        gamma,
        &kernel,
        scaled_test.len(),
        RollingMode::Evaluation(&scaled_test),
    )?;
    let eval = forecastkit::metrics::evaluate(&scaled_test, &preds)?;
    println!(
        "\nrolling one-step over {} months: MAPE {:.2}%  RMSE {:.3} (scale: hundreds)",
        scaled_test.len(),
        eval.mape.unwrap_or(f64::NAN),
        eval.rmse,
    );

    println!("\n month  actual  predicted");
    for (k, (a, p)) in scaled_test.iter().zip(&preds).enumerate() {
        println!("  {:>4}  {:>6.0}  {:>9.0}", 61 + k, a * 100.0, p * 100.0);
    }
    Ok(())
}
