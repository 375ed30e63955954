//! Small simulators: a nonlinear moving-average process and the classical
//! four-component decomposition generator.

use crate::series::TimeSeries;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Simulate the nonlinear moving-average process
/// `y_t = ε_t + α·ε²_{t−1}` with i.i.d. standard-normal innovations.
/// Deterministic for a fixed seed. The process is nonlinear in mean (its
/// expectation is α·E[ε²] = α) but homoskedastic.
pub fn simulate_nma(n: usize, alpha: f64, seed: u64) -> TimeSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eps: Vec<f64> = (0..=n).map(|_| StandardNormal.sample(&mut rng)).collect();
    let values = (1..=n)
        .map(|t| eps[t] + alpha * eps[t - 1] * eps[t - 1])
        .collect();
    TimeSeries::new(format!("nma(alpha={alpha})"), values)
}

/// How the four classical components are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentMode {
    /// `y_t = T_t + S_t + C_t + I_t`
    Additive,
    /// `y_t = T_t · S_t · C_t · I_t`
    Multiplicative,
}

/// Build a series from trend, seasonal, cyclical, and irregular component
/// generators evaluated at `t = 0..n`.
pub fn simulate_components(
    n: usize,
    trend: impl Fn(usize) -> f64,
    seasonal: impl Fn(usize) -> f64,
    cyclical: impl Fn(usize) -> f64,
    irregular: impl Fn(usize) -> f64,
    mode: ComponentMode,
) -> TimeSeries {
    let values = (0..n)
        .map(|t| match mode {
            ComponentMode::Additive => trend(t) + seasonal(t) + cyclical(t) + irregular(t),
            ComponentMode::Multiplicative => trend(t) * seasonal(t) * cyclical(t) * irregular(t),
        })
        .collect();
    let label = match mode {
        ComponentMode::Additive => "components(additive)",
        ComponentMode::Multiplicative => "components(multiplicative)",
    };
    TimeSeries::new(label, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::{TransformPipeline, TransformStep};

    #[test]
    fn zero_alpha_is_plain_white_noise() {
        let series = simulate_nma(5000, 0.0, 31);
        let mean = series.mean();
        let var = series
            .values
            .iter()
            .map(|v| (v - mean) * (v - mean))
            .sum::<f64>()
            / series.len() as f64;
        assert!(mean.abs() < 0.1, "mean = {mean}");
        assert!((var - 1.0).abs() < 0.1, "var = {var}");
    }

    #[test]
    fn sample_mean_approaches_alpha() {
        let n = 100_000;
        let alpha = 0.7;
        let series = simulate_nma(n, alpha, 12345);
        let mean = series.mean();
        let var = series
            .values
            .iter()
            .map(|v| (v - mean) * (v - mean))
            .sum::<f64>()
            / n as f64;
        let tolerance = 4.0 * (var / n as f64).sqrt();
        assert!(
            (mean - alpha).abs() < tolerance,
            "mean = {mean}, expected ≈ {alpha} ± {tolerance}"
        );
    }

    #[test]
    fn same_seed_reproduces_the_series_exactly() {
        let a = simulate_nma(200, 0.5, 99);
        let b = simulate_nma(200, 0.5, 99);
        assert_eq!(a.values, b.values);
        let c = simulate_nma(200, 0.5, 100);
        assert_ne!(a.values, c.values);
    }

    #[test]
    fn zero_components_give_a_zero_series() {
        let s = simulate_components(
            10,
            |_| 0.0,
            |_| 0.0,
            |_| 0.0,
            |_| 0.0,
            ComponentMode::Additive,
        );
        assert!(s.values.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn multiplicative_with_unit_noise_is_exactly_trend_times_seasonal() {
        let trend = |t: usize| 1.0 + t as f64;
        let seasonal = |t: usize| [1.1, 0.9, 1.0, 1.2][t % 4];
        let s = simulate_components(
            16,
            trend,
            seasonal,
            |_| 1.0,
            |_| 1.0,
            ComponentMode::Multiplicative,
        );
        for (t, v) in s.values.iter().enumerate() {
            assert!((v - trend(t) * seasonal(t)).abs() < 1e-15);
        }
    }

    #[test]
    fn seasonal_difference_removes_additive_seasonality() {
        // Linear trend + period-4 seasonality, no cycle/noise: the lag-4
        // difference is the constant 4·slope.
        let s = simulate_components(
            24,
            |t| 2.0 + 0.5 * t as f64,
            |t| [3.0, -1.0, 0.5, -2.5][t % 4],
            |_| 0.0,
            |_| 0.0,
            ComponentMode::Additive,
        );
        let mut pipeline = TransformPipeline::from_steps(vec![TransformStep::difference(4)]);
        let diff = pipeline.apply(&s.values).unwrap();
        for v in &diff {
            assert!((v - 2.0).abs() < 1e-12);
        }
    }
}
