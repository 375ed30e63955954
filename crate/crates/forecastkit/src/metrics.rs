//! Forecast accuracy measures.
//!
//! All measures are computed from the error `e_t = actual_t − forecast_t`.
//! Percentage and normalized measures are undefined for some inputs (zero
//! actuals, constant actuals, all-zero signals); those are reported as `None`
//! and listed in [`ForecastEvaluation::flags`] rather than silently
//! returning infinities.

use crate::error::{ForecastError, Result};
use serde::{Deserialize, Serialize};

/// The ten standard accuracy measures for one actual/forecast pair.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ForecastEvaluation {
    /// Number of compared points.
    pub n: usize,
    /// Mean forecast error (bias): `mean(e)`.
    pub mfe: f64,
    /// Mean absolute error: `mean(|e|)`.
    pub mae: f64,
    /// Mean absolute percentage error: `100·mean(|e_t/a_t|)`; `None` when an
    /// actual is zero.
    pub mape: Option<f64>,
    /// Mean percentage error: `100·mean(e_t/a_t)`; `None` when an actual is
    /// zero.
    pub mpe: Option<f64>,
    /// Mean squared error: `mean(e²)`.
    pub mse: f64,
    /// Sum of squared errors: `Σ e²`.
    pub sse: f64,
    /// Signed mean squared error: `mean(sign(e)·e²)` with `sign(0) = 0`.
    pub smse: f64,
    /// Root mean squared error.
    pub rmse: f64,
    /// MSE normalized by the sample variance of the actuals (divisor `n−1`);
    /// `None` when the actuals are constant or fewer than two.
    pub nmse: Option<f64>,
    /// Theil's U: `rms(e) / (rms(actual)·rms(forecast))`; `None` when either
    /// root-mean-square in the denominator is zero.
    pub theil_u: Option<f64>,
    /// Names of the measures that were undefined for this input.
    pub flags: Vec<String>,
}

fn validate(actual: &[f64], forecast: &[f64]) -> Result<()> {
    if actual.len() != forecast.len() {
        return Err(ForecastError::InvalidInput(format!(
            "actual has {} points but forecast has {}",
            actual.len(),
            forecast.len()
        )));
    }
    if actual.is_empty() {
        return Err(ForecastError::InvalidInput(
            "cannot score an empty forecast".into(),
        ));
    }
    if actual
        .iter()
        .chain(forecast.iter())
        .any(|v| !v.is_finite())
    {
        return Err(ForecastError::InvalidInput(
            "accuracy measures require finite values".into(),
        ));
    }
    Ok(())
}

/// Compute all ten measures.
pub fn evaluate(actual: &[f64], forecast: &[f64]) -> Result<ForecastEvaluation> {
    validate(actual, forecast)?;
    let n = actual.len();
    let nf = n as f64;
    let errors: Vec<f64> = actual.iter().zip(forecast).map(|(a, f)| a - f).collect();

    let mfe = errors.iter().sum::<f64>() / nf;
    let mae = errors.iter().map(|e| e.abs()).sum::<f64>() / nf;
    let sse = errors.iter().map(|e| e * e).sum::<f64>();
    let mse = sse / nf;
    let rmse = mse.sqrt();
    let smse = errors
        .iter()
        .map(|e| {
            if *e > 0.0 {
                e * e
            } else if *e < 0.0 {
                -(e * e)
            } else {
                0.0
            }
        })
        .sum::<f64>()
        / nf;

    let mut flags = Vec::new();

    let (mape, mpe) = if actual.iter().any(|a| *a == 0.0) {
        flags.push("mape".to_string());
        flags.push("mpe".to_string());
        (None, None)
    } else {
        let abs = errors
            .iter()
            .zip(actual)
            .map(|(e, a)| (e / a).abs())
            .sum::<f64>()
            / nf;
        let signed = errors
            .iter()
            .zip(actual)
            .map(|(e, a)| e / a)
            .sum::<f64>()
            / nf;
        (Some(100.0 * abs), Some(100.0 * signed))
    };

    let nmse = if n < 2 {
        flags.push("nmse".to_string());
        None
    } else {
        let mean_a = actual.iter().sum::<f64>() / nf;
        let var_a = actual.iter().map(|a| (a - mean_a).powi(2)).sum::<f64>() / (nf - 1.0);
        if var_a == 0.0 {
            flags.push("nmse".to_string());
            None
        } else {
            Some(mse / var_a)
        }
    };

    let rms_a = (actual.iter().map(|a| a * a).sum::<f64>() / nf).sqrt();
    let rms_f = (forecast.iter().map(|f| f * f).sum::<f64>() / nf).sqrt();
    let theil_u = if rms_a == 0.0 || rms_f == 0.0 {
        flags.push("theil_u".to_string());
        None
    } else {
        Some(rmse / (rms_a * rms_f))
    };

    Ok(ForecastEvaluation {
        n,
        mfe,
        mae,
        mape,
        mpe,
        mse,
        sse,
        smse,
        rmse,
        nmse,
        theil_u,
        flags,
    })
}

/// Bounded variant of Theil's statistic:
/// `rms(e) / (rms(actual) + rms(forecast))`, which lies in `[0, 1]`.
/// `None` when both signals are identically zero.
pub fn theil_u1(actual: &[f64], forecast: &[f64]) -> Result<Option<f64>> {
    validate(actual, forecast)?;
    let n = actual.len() as f64;
    let rms_e = (actual
        .iter()
        .zip(forecast)
        .map(|(a, f)| (a - f).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    let rms_a = (actual.iter().map(|a| a * a).sum::<f64>() / n).sqrt();
    let rms_f = (forecast.iter().map(|f| f * f).sum::<f64>() / n).sqrt();
    if rms_a + rms_f == 0.0 {
        return Ok(None);
    }
    Ok(Some(rms_e / (rms_a + rms_f)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TOL: f64 = 1e-12;

    #[test]
    fn hand_worked_three_point_example() {
        // actual [1,2,3], forecast [2,2,2] → e = [−1, 0, 1].
        let m = evaluate(&[1.0, 2.0, 3.0], &[2.0, 2.0, 2.0]).unwrap();
        assert_eq!(m.n, 3);
        assert!(m.mfe.abs() < TOL);
        assert!((m.mae - 2.0 / 3.0).abs() < TOL);
        assert!((m.mape.unwrap() - 400.0 / 9.0).abs() < 1e-9);
        assert!((m.mpe.unwrap() + 200.0 / 9.0).abs() < 1e-9);
        assert!((m.mse - 2.0 / 3.0).abs() < TOL);
        assert!((m.sse - 2.0).abs() < TOL);
        assert!(m.smse.abs() < TOL);
        assert!((m.rmse - 0.8164965809277260).abs() < 1e-12);
        assert!((m.nmse.unwrap() - 2.0 / 3.0).abs() < TOL);
        assert!((m.theil_u.unwrap() - 0.18898223650461363).abs() < 1e-12);
        assert!(m.flags.is_empty());
    }

    #[test]
    fn bounded_theil_variant() {
        let u1 = theil_u1(&[1.0, 2.0, 3.0], &[2.0, 2.0, 2.0])
            .unwrap()
            .unwrap();
        // rms(e)=√(2/3), rms(a)=√(14/3), rms(f)=2.
        let expect = (2.0f64 / 3.0).sqrt() / ((14.0f64 / 3.0).sqrt() + 2.0);
        assert!((u1 - expect).abs() < TOL);
        assert!((0.0..=1.0).contains(&u1));
    }

    #[test]
    fn zero_actuals_disable_percentage_measures() {
        let m = evaluate(&[0.0, 1.0], &[0.5, 1.5]).unwrap();
        assert!(m.mape.is_none());
        assert!(m.mpe.is_none());
        assert!(m.flags.contains(&"mape".to_string()));
        assert!(m.flags.contains(&"mpe".to_string()));
        // The scale-free but ratio-based measures survive.
        assert!(m.theil_u.is_some());
    }

    #[test]
    fn constant_actuals_disable_nmse() {
        let m = evaluate(&[2.0, 2.0, 2.0], &[1.0, 2.0, 3.0]).unwrap();
        assert!(m.nmse.is_none());
        assert!(m.flags.contains(&"nmse".to_string()));
    }

    #[test]
    fn perfect_forecast_scores_zero() {
        let a = [1.5, -2.0, 3.25, 4.0];
        let m = evaluate(&a, &a).unwrap();
        assert_eq!(m.mfe, 0.0);
        assert_eq!(m.mae, 0.0);
        assert_eq!(m.mse, 0.0);
        assert_eq!(m.sse, 0.0);
        assert_eq!(m.rmse, 0.0);
        assert_eq!(m.smse, 0.0);
        assert_eq!(m.mape, Some(0.0));
        assert_eq!(m.theil_u, Some(0.0));
    }

    #[test]
    fn mismatched_lengths_are_rejected() {
        assert!(evaluate(&[1.0, 2.0], &[1.0]).is_err());
        assert!(evaluate(&[], &[]).is_err());
        assert!(evaluate(&[f64::NAN], &[1.0]).is_err());
    }

    #[test]
    fn json_round_trip_uses_null_for_unavailable() {
        let m = evaluate(&[0.0, 1.0], &[0.5, 1.5]).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert!(json.contains("\"mape\":null"));
        let back: ForecastEvaluation = serde_json::from_str(&json).unwrap();
        assert!(back.mape.is_none());
        assert_eq!(back.n, 2);
    }

    proptest! {
        #[test]
        fn positive_scaling_behaves(
            pairs in proptest::collection::vec((0.1f64..100.0, 0.1f64..100.0), 2..30),
            k in 0.1f64..50.0,
        ) {
            let a: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let f: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            let ka: Vec<f64> = a.iter().map(|v| k * v).collect();
            let kf: Vec<f64> = f.iter().map(|v| k * v).collect();
            let m = evaluate(&a, &f).unwrap();
            let mk = evaluate(&ka, &kf).unwrap();
            // Absolute measures scale, percentage measures do not.
            prop_assert!((mk.mae - k * m.mae).abs() < 1e-7 * (1.0 + m.mae) * k.max(1.0));
            prop_assert!((mk.mse - k * k * m.mse).abs() < 1e-6 * (1.0 + m.mse) * (k * k).max(1.0));
            if let (Some(p), Some(pk)) = (m.mape, mk.mape) {
                prop_assert!((p - pk).abs() < 1e-8 * (1.0 + p));
            }
            if let (Some(u), Some(uk)) = (m.theil_u, mk.theil_u) {
                // Theil's U divides RMS once by each signal's scale, so
                // multiplying both signals by k divides U by k.
                prop_assert!((uk - u / k).abs() < 1e-8 * (1.0 + u));
            }
        }

        #[test]
        fn negation_flips_signed_measures(
            pairs in proptest::collection::vec((0.1f64..100.0, 0.1f64..100.0), 2..30),
        ) {
            let a: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let f: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            let na: Vec<f64> = a.iter().map(|v| -v).collect();
            let nf: Vec<f64> = f.iter().map(|v| -v).collect();
            let m = evaluate(&a, &f).unwrap();
            let mn = evaluate(&na, &nf).unwrap();
            prop_assert!((mn.mfe + m.mfe).abs() < 1e-9 * (1.0 + m.mfe.abs()));
            prop_assert!((mn.smse + m.smse).abs() < 1e-9 * (1.0 + m.smse.abs()));
            prop_assert!((mn.mae - m.mae).abs() < 1e-9 * (1.0 + m.mae));
            prop_assert!((mn.rmse - m.rmse).abs() < 1e-9 * (1.0 + m.rmse));
        }

        #[test]
        fn theil_u_is_nonnegative(
            pairs in proptest::collection::vec((-100.0f64..100.0, -100.0f64..100.0), 2..30),
        ) {
            let a: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let f: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            let m = evaluate(&a, &f).unwrap();
            if let Some(u) = m.theil_u {
                prop_assert!(u >= 0.0);
            }
            if let Some(u1) = theil_u1(&a, &f).unwrap() {
                prop_assert!((0.0..=1.0 + 1e-12).contains(&u1));
            }
        }
    }
}
