//! The full set of forecast accuracy measures on a small worked example,
//! including the cases where individual measures are undefined and get
//! flagged instead of silently reported.
//!
//! Run with `cargo run --example evaluate_metrics`.

use forecastkit::metrics::evaluate;
use forecastkit::Result;

fn show(value: Option<f64>) -> String {
    match value {
        Some(v) => format!("{v:.6}"),
        None => "undefined".into(),
    }
}

fn main() -> Result<()> {
    let actual = [112.0, 118.0, 132.0, 129.0, 121.0, 135.0];
    let forecast = [110.0, 121.0, 130.5, 131.0, 118.5, 137.0];

    let eval = evaluate(&actual, &forecast)?;
    println!("n                     {}", eval.n);
    println!("mean error (bias)     {:.6}", eval.mfe);
    println!("mean absolute error   {:.6}", eval.mae);
    println!("MAPE                  {}%", show(eval.mape));
    println!("mean percentage error {}%", show(eval.mpe));
    println!("mean squared error    {:.6}", eval.mse);
    println!("sum of squared errors {:.6}", eval.sse);
    println!("signed MSE            {:.6}", eval.smse);
    println!("RMSE                  {:.6}", eval.rmse);
    println!("normalized MSE        {}", show(eval.nmse));
    println!("Theil's U             {}", show(eval.theil_u));

    // Percentage-based measures divide by the actual values, so a zero
    // actual makes them undefined; the result records which ones.
    let with_zero = evaluate(&[3.0, 0.0, 2.0], &[2.5, 0.5, 2.5])?;
    println!(
        "\nwith a zero actual: MAPE {}, flags {:?}",
        show(with_zero.mape),
        with_zero.flags,
    );

    // A constant actual series has no variance to normalize by.
    let constant = evaluate(&[5.0, 5.0, 5.0], &[4.0, 5.0, 6.0])?;
    println!(
        "constant actuals:   NMSE {}, flags {:?}",
        show(constant.nmse),
        constant.flags,
    );
    Ok(())
}
