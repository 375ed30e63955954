//! Minimum mean-square-error forecasts from a fitted model by iterating the
//! difference equation with future innovations set to zero.

use super::estimate::one_step_residuals;
use super::SarimaModel;
use crate::error::{ForecastError, Result};
use crate::series::TimeSeries;

/// Forecast `horizon` values beyond the end of `train`.
///
/// The model's recorded differencing steps are re-applied to `train` (so the
/// history may extend past the original fitting sample — useful for rolling
/// one-step evaluation), in-sample residuals are rebuilt on the differenced
/// scale, and the recursion is iterated with future residuals set to zero.
/// The differenced forecasts are finally integrated back through the
/// pipeline, so the output is on the same scale as `train`.
pub fn forecast(model: &SarimaModel, train: &TimeSeries, horizon: usize) -> Result<Vec<f64>> {
    if horizon == 0 {
        return Err(ForecastError::InvalidInput(
            "forecast horizon must be at least 1".into(),
        ));
    }
    let mut pipeline = model.pipeline.clone();
    let z = pipeline.apply(&train.values)?;
    let m = z.len();
    if m == 0 {
        return Err(ForecastError::InvalidInput(
            "differencing consumed the entire history".into(),
        ));
    }
    let eps = one_step_residuals(&z, model);
    let presample = z.iter().sum::<f64>() / m as f64;

    let ar = model.ar_polynomial();
    let ma = model.ma_polynomial();
    let mut extended = z;
    for _ in 0..horizon {
        let t = extended.len();
        let mut next = model.c;
        for (i, a) in ar.iter().enumerate().skip(1) {
            let past = if t >= i { extended[t - i] } else { presample };
            next -= a * past;
        }
        for (j, b) in ma.iter().enumerate().skip(1) {
            // Future residuals (index ≥ m) are zero under the MMSE forecast.
            if t >= j && t - j < m {
                next += b * eps[t - j];
            }
        }
        extended.push(next);
    }
    pipeline.invert(&extended[m..])
}
