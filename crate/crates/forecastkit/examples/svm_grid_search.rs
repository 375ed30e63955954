//! Hyper-parameter selection for the kernel regressor: scan a grid of RBF
//! widths, regularization constants, and embedding dimensions by held-out
//! one-step validation, then score the winner on the real test span.
//!
//! Run with `cargo run --release --example svm_grid_search`.

use forecastkit::svm::{grid_search, rolling_forecast, RbfKernel, RollingMode, WindowConfig};
use forecastkit::Result;

fn main() -> Result<()> {
    let series = forecastkit::bench::load_dataset("beer")?;
    let (train, test) = series.split(24)?;

    let sigma_grid = [1.0, 5.0, 10.0, 33.0, 100.0];
    let gamma_grid = [0.1, 1.0, 10.0, 50.0, 1000.0];
    let n_grid = [4, 8, 12, 19];

    let winner = grid_search(&train, &sigma_grid, &gamma_grid, &n_grid, 1)?;
    println!(
        "winner over {} candidates: sigma = {}, gamma = {}, n = {} (validation MSE {:.4})",
        sigma_grid.len() * gamma_grid.len() * n_grid.len(),
        winner.sigma,
        winner.gamma,
        winner.n,
        winner.validation_mse,
    );

    let kernel = RbfKernel::new(winner.sigma)?;
    let config = WindowConfig::spanning(winner.n, train.len())?;
    let preds = rolling_forecast(
        &train,
        &config,
        winner.gamma,
        &kernel,
        test.len(),
        RollingMode::Evaluation(&test.values),
    )?;
    let eval = forecastkit::metrics::evaluate(&test.values, &preds)?;
    println!(
        "test span: MAPE {:.2}%  RMSE {:.3}  Theil U {:.4}",
        eval.mape.unwrap_or(f64::NAN),
        eval.rmse,
        eval.theil_u.unwrap_or(f64::NAN),
    );

    // Compare against the same model family run blind (no revealed values).
    let blind = rolling_forecast(
        &train,
        &config,
        winner.gamma,
        &kernel,
        test.len(),
        RollingMode::Recursive,
    )?;
    let eval_blind = forecastkit::metrics::evaluate(&test.values, &blind)?;
    println!(
        "same model, recursive (no feedback): MAPE {:.2}%",
        eval_blind.mape.unwrap_or(f64::NAN),
    );
    Ok(())
}
