//! Identification diagnostics on the lynx trappings series: sample
//! autocorrelations, partial autocorrelations, and a unit-root check.
//!
//! Run with `cargo run --example correlogram`.

use forecastkit::diagnostics::{acf, dickey_fuller, pacf};
use forecastkit::Result;

fn bar(value: f64) -> String {
    let width = (value.abs() * 30.0).round() as usize;
    let fill = "#".repeat(width.min(30));
    if value < 0.0 {
        format!("{fill:>30}|{:30}", "")
    } else {
        format!("{:>30}|{fill:<30}", "")
    }
}

fn main() -> Result<()> {
    let series = forecastkit::bench::load_dataset("lynx")?;
    let log10: Vec<f64> = series.values.iter().map(|v| v.log10()).collect();

    let acf_result = acf(&log10, 20)?;
    println!("autocorrelations of log10(lynx), ±band {:.3}", acf_result.band);
    for (lag, value) in acf_result.lags.iter().zip(&acf_result.values) {
        let mark = if value.abs() > acf_result.band { "*" } else { " " };
        println!("  lag {lag:>2}  {value:>7.3} {mark} {}", bar(*value));
    }

    let pacf_result = pacf(&log10, 20)?;
    println!("\npartial autocorrelations, ±band {:.3}", pacf_result.band);
    for (lag, value) in pacf_result.lags.iter().zip(&pacf_result.values) {
        let mark = if value.abs() > pacf_result.band { "*" } else { " " };
        println!("  lag {lag:>2}  {value:>7.3} {mark} {}", bar(*value));
    }

    let verdict = dickey_fuller(&log10)?;
    println!(
        "\nunit-root test: statistic {:.3} vs critical {:.3} -> {}",
        verdict.test_statistic,
        verdict.critical_value,
        if verdict.stationary { "stationary" } else { "non-stationary" }
    );
    Ok(())
}
