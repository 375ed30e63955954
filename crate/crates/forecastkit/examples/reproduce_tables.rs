//! Rerun the published comparison tables for one dataset and print the
//! side-by-side summary plus the raw CSV rows. `TableSelector::All` covers
//! all six datasets; single tables keep this example fast.
//!
//! Run with `cargo run --release --example reproduce_tables`.

use forecastkit::bench::{reproduce, TableSelector};
use forecastkit::Result;

fn main() -> Result<()> {
    // Table 7.5 is the quarterly-sales dataset: one seasonal ARIMA row,
    // three seasonal-network rows, one support-vector row.
    let report = reproduce(TableSelector::T75)?;

    println!("{}", report.render_summary());

    println!("raw rows:");
    for line in report.to_csv().lines().take(11) {
        println!("  {line}");
    }

    // `check()` turns gate failures into an error with a nonzero exit code;
    // the harness CLI exposes the same thing as `reproduce --check`.
    match report.check() {
        Ok(()) => println!("\nall gated rows within their acceptance bands"),
        Err(e) => println!("\ngate failures: {e}"),
    }
    Ok(())
}
