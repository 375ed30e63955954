//! Preprocessing pipelines: compose a log transform with regular and
//! seasonal differencing, then invert the whole stack to map forecasts back
//! to the original scale.
//!
//! Run with `cargo run --example transform_roundtrip`.

use forecastkit::transform::{fractional_difference, TransformPipeline, TransformStep};
use forecastkit::Result;

fn main() -> Result<()> {
    let series = forecastkit::bench::load_dataset("airline")?;

    // ln -> (1-L) -> (1-L^12): the classic stabilization for a series whose
    // seasonal swing grows with its level.
    let mut pipeline = TransformPipeline::from_steps(vec![
        TransformStep::NaturalLog,
        TransformStep::difference(1),
        TransformStep::difference(12),
    ]);
    let stationary = pipeline.apply(&series.values)?;
    println!(
        "airline: {} raw points -> {} after ln + d=1 + D=1 (loses {})",
        series.len(),
        stationary.len(),
        pipeline.length_loss()
    );

    let mean = stationary.iter().sum::<f64>() / stationary.len() as f64;
    let var = stationary.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
        / stationary.len() as f64;
    println!("transformed mean {mean:.5}, variance {var:.5}");

    // Feeding the transformed vector straight back reconstructs the input.
    let reconstructed = pipeline.invert(&stationary)?;
    let worst = series
        .values
        .iter()
        .zip(&reconstructed)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0_f64, f64::max);
    println!("round-trip worst absolute error: {worst:.3e}");

    // A vector of any other length is treated as a block of future values
    // on the differenced scale and integrated forward - this is how model
    // forecasts come back to the raw scale.
    let continued = pipeline.invert(&[0.0, 0.0, 0.0])?;
    println!(
        "three zero-innovation continuations: {:.1}, {:.1}, {:.1} (last actual {:.1})",
        continued[0],
        continued[1],
        continued[2],
        series.values[series.len() - 1],
    );

    // At integer orders, fractional differencing collapses to the ordinary
    // difference operator (truncation 1 keeps the same output length).
    let frac = fractional_difference(&series.values, 1.0, 1)?;
    let mut plain = TransformPipeline::from_steps(vec![TransformStep::difference(1)]);
    let ordinary = plain.apply(&series.values)?;
    assert_eq!(frac, ordinary);
    println!("fractional differencing at d=1 matches the ordinary difference exactly");
    Ok(())
}
