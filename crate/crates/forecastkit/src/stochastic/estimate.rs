//! Parameter estimation: Yule-Walker for pure AR models and conditional
//! sum-of-squares minimization for the general seasonal case.

use super::{check_roots, empty_model, min_root_modulus, SarimaModel, SarimaOrder, ROOT_MARGIN};
use crate::diagnostics::{acf_values, acvf};
use crate::error::{ForecastError, Result};
use crate::numerics::{levinson_toeplitz, nelder_mead, NelderMeadConfig};
use crate::series::TimeSeries;
use crate::transform::{TransformPipeline, TransformStep};

/// One-step prediction residuals of `model` on the (already differenced)
/// series `z`. Presample values of `z` are replaced by its sample mean and
/// presample residuals by zero, so every point of `z` yields a residual.
pub(crate) fn one_step_residuals(z: &[f64], model: &SarimaModel) -> Vec<f64> {
    let ar = model.ar_polynomial();
    let ma = model.ma_polynomial();
    let presample = z.iter().sum::<f64>() / z.len().max(1) as f64;
    let mut eps = vec![0.0; z.len()];
    for t in 0..z.len() {
        let mut pred = model.c;
        for (i, a) in ar.iter().enumerate().skip(1) {
            let past = if t >= i { z[t - i] } else { presample };
            pred -= a * past;
        }
        for (j, b) in ma.iter().enumerate().skip(1) {
            if t >= j {
                pred += b * eps[t - j];
            }
        }
        eps[t] = z[t] - pred;
    }
    eps
}

/// Sum of squared one-step residuals of `model` on `z`.
pub(crate) fn conditional_sse(z: &[f64], model: &SarimaModel) -> f64 {
    one_step_residuals(z, model).iter().map(|e| e * e).sum()
}

/// Fit a pure autoregressive model of order `p` by solving the Yule-Walker
/// equations `R φ = r` (Toeplitz in the sample autocorrelations) with the
/// Levinson recursion.
///
/// The constant is recovered as `c = x̄·(1 − Σφ_i)` and the innovation
/// variance as `σ² = c₀·(1 − Σφ_i r_i)`.
pub fn fit_ar_yule_walker(train: &TimeSeries, p: usize) -> Result<SarimaModel> {
    let n = train.len();
    if p == 0 {
        return Err(ForecastError::InvalidInput(
            "autoregressive order must be at least 1".into(),
        ));
    }
    if 2 * p >= n {
        return Err(ForecastError::InvalidInput(format!(
            "order {p} is too high for {n} observations (need p < n/2)"
        )));
    }
    let r = acf_values(&train.values, p)?;
    let phi = levinson_toeplitz(&r[..p], &r[1..=p])?;
    let c0 = acvf(&train.values, 0)?[0];
    let explained: f64 = phi.iter().zip(&r[1..=p]).map(|(f, rk)| f * rk).sum();
    let sigma2 = c0 * (1.0 - explained);
    if !sigma2.is_finite() || sigma2 <= 0.0 {
        return Err(ForecastError::OptimFailure(format!(
            "Yule-Walker equations gave a nonpositive innovation variance ({sigma2}); \
             the sample autocorrelations are degenerate"
        )));
    }
    let phi_sum: f64 = phi.iter().sum();
    let mut model = empty_model(SarimaOrder::new(p, 0, 0));
    model.c = train.mean() * (1.0 - phi_sum);
    model.phi = phi;
    model.sigma2 = sigma2;
    Ok(model)
}

/// Split a flat optimizer parameter vector back into model coefficients.
fn unpack(params: &[f64], order: SarimaOrder, pipeline: &TransformPipeline) -> SarimaModel {
    let mut model = empty_model(order);
    model.pipeline = pipeline.clone();
    let mut idx = 0;
    if order.includes_constant() {
        model.c = params[idx];
        idx += 1;
    }
    for slot in [
        &mut model.phi,
        &mut model.theta,
        &mut model.seasonal_phi,
        &mut model.seasonal_theta,
    ] {
        for v in slot.iter_mut() {
            *v = params[idx];
            idx += 1;
        }
    }
    model
}

/// Penalty pushing root moduli outside the unit circle: zero when the
/// smallest root modulus clears 1 + margin, growing linearly inside.
fn root_penalty(coeffs: &[f64]) -> f64 {
    match min_root_modulus(coeffs) {
        Ok(min_mod) => {
            if min_mod <= 0.0 {
                return f64::INFINITY;
            }
            ((1.0 + ROOT_MARGIN) / min_mod - 1.0).max(0.0)
        }
        Err(_) => f64::INFINITY,
    }
}

/// Fit a seasonal ARIMA model by conditional sum of squares.
///
/// The nonseasonal and seasonal differences are applied first (recorded in
/// the returned model's pipeline); the squared one-step residuals of the
/// differenced series are then minimized over `(c, φ, θ, Φ, Θ)` with
/// Nelder-Mead, started from the Yule-Walker solution for φ and zeros for
/// the remaining coefficients. Candidate coefficient sets whose AR or MA
/// polynomial has a root inside the unit circle are penalized, so the
/// returned model is both stationary and invertible. A constant is estimated
/// only for undifferenced models (`d = D = 0`).
pub fn fit_css(train: &TimeSeries, order: SarimaOrder) -> Result<SarimaModel> {
    order.validate(train.len())?;
    let mut pipeline = TransformPipeline::new();
    for _ in 0..order.d {
        pipeline.push(TransformStep::difference(1));
    }
    for _ in 0..order.seasonal_d {
        pipeline.push(TransformStep::difference(order.s));
    }
    let z = pipeline.apply(&train.values)?;
    let m = z.len();
    let k = order.n_coefficients();
    if m < 3 * (k + 1) {
        return Err(ForecastError::InvalidInput(format!(
            "{m} differenced observations are too few to estimate {k} coefficients \
             (need at least {})",
            3 * (k + 1)
        )));
    }

    if k == 0 {
        // Mean-only (or pure differencing) model: closed form.
        let mut model = empty_model(order);
        model.pipeline = pipeline;
        if order.includes_constant() {
            model.c = z.iter().sum::<f64>() / m as f64;
        }
        let sse = conditional_sse(&z, &model);
        model.sigma2 = sse / m as f64;
        return Ok(model);
    }

    // Start point: Yule-Walker for the nonseasonal AR part, zeros elsewhere.
    let phi_start = if order.p > 0 {
        let r = acf_values(&z, order.p)?;
        levinson_toeplitz(&r[..order.p], &r[1..=order.p])?
    } else {
        Vec::new()
    };
    let z_mean = z.iter().sum::<f64>() / m as f64;
    let mut x0 = Vec::with_capacity(k + 1);
    if order.includes_constant() {
        x0.push(z_mean * (1.0 - phi_start.iter().sum::<f64>()));
    }
    x0.extend_from_slice(&phi_start);
    x0.extend(std::iter::repeat(0.0).take(order.q + order.seasonal_p + order.seasonal_q));

    let objective = |params: &[f64]| -> f64 {
        let candidate = unpack(params, order, &TransformPipeline::new());
        let penalty =
            root_penalty(&candidate.ar_polynomial()) + root_penalty(&candidate.ma_polynomial());
        if penalty.is_infinite() {
            return f64::INFINITY;
        }
        conditional_sse(&z, &candidate) + 1e6 * penalty
    };
    let result = nelder_mead(objective, &x0, &NelderMeadConfig::default())?;
    if !result.fx.is_finite() {
        return Err(ForecastError::OptimFailure(format!(
            "conditional sum-of-squares search left the feasible region for order {order}"
        )));
    }

    let mut model = unpack(&result.x, order, &pipeline);
    let sse = conditional_sse(&z, &model);
    model.sigma2 = sse / m as f64;
    if !model.sigma2.is_finite() || model.sigma2 < 0.0 {
        return Err(ForecastError::OptimFailure(format!(
            "estimation produced an invalid residual variance for order {order}"
        )));
    }
    let roots = check_roots(&model)?;
    if !roots.stationary || !roots.invertible {
        return Err(ForecastError::OptimFailure(format!(
            "optimum for order {order} sits on the unit-circle boundary \
             (min AR root modulus {:.6}, min MA root modulus {:.6})",
            roots.min_ar_root_modulus, roots.min_ma_root_modulus
        )));
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stochastic::test_sim;

    #[test]
    fn yule_walker_recovers_ar1_coefficient() {
        let data = test_sim::arma(&[0.5], &[], 0.0, 5000, 7);
        let series = TimeSeries::new("ar1", data);
        let model = fit_ar_yule_walker(&series, 1).unwrap();
        assert!(
            model.phi[0] > 0.45 && model.phi[0] < 0.55,
            "phi_hat = {}",
            model.phi[0]
        );
        let roots = check_roots(&model).unwrap();
        assert!(roots.stationary);
        assert!(model.sigma2 > 0.0);
    }

    #[test]
    fn yule_walker_on_white_noise_is_near_zero() {
        let n = 2000;
        let data = test_sim::arma(&[], &[], 0.0, n, 11);
        let series = TimeSeries::new("noise", data);
        let model = fit_ar_yule_walker(&series, 1).unwrap();
        assert!(model.phi[0].abs() < 3.0 / (n as f64).sqrt());
    }

    #[test]
    fn yule_walker_constant_recovers_process_mean() {
        // y_t = 5 + 0.4·y_{t−1} + ε_t has mean 5/(1−0.4); c should recover
        // the intercept scale: c = x̄(1−Σφ) ≈ 5.
        let data = test_sim::arma(&[0.4], &[], 5.0, 20000, 3);
        let series = TimeSeries::new("ar1c", data);
        let model = fit_ar_yule_walker(&series, 1).unwrap();
        assert!((model.c - 5.0).abs() < 0.3, "c = {}", model.c);
    }

    #[test]
    fn yule_walker_rejects_bad_inputs() {
        let short = TimeSeries::new("short", vec![1.0, 2.0, 3.0, 4.0]);
        assert!(fit_ar_yule_walker(&short, 2).is_err());
        assert!(fit_ar_yule_walker(&short, 0).is_err());
        let constant = TimeSeries::new("flat", vec![2.0; 50]);
        assert!(fit_ar_yule_walker(&constant, 1).is_err());
    }

    #[test]
    fn css_recovers_arma11_parameters() {
        let data = test_sim::arma(&[0.6], &[0.3], 0.0, 5000, 21);
        let series = TimeSeries::new("arma11", data);
        let model = fit_css(&series, SarimaOrder::new(1, 0, 1)).unwrap();
        assert!((model.phi[0] - 0.6).abs() < 0.1, "phi = {}", model.phi[0]);
        assert!((model.theta[0] - 0.3).abs() < 0.1, "theta = {}", model.theta[0]);
        let roots = check_roots(&model).unwrap();
        assert!(roots.stationary && roots.invertible);
    }

    #[test]
    fn mean_only_model_matches_sample_moments() {
        let series = TimeSeries::new("toy", vec![2.0, 4.0, 9.0, 1.0, 4.0]);
        let model = fit_css(&series, SarimaOrder::new(0, 0, 0)).unwrap();
        let mean = series.mean();
        assert!((model.c - mean).abs() < 1e-12);
        let var = series
            .values
            .iter()
            .map(|v| (v - mean) * (v - mean))
            .sum::<f64>()
            / series.len() as f64;
        assert!((model.sigma2 - var).abs() < 1e-12);
    }

    #[test]
    fn differenced_models_have_no_constant() {
        let data: Vec<f64> = (0..60).map(|t| t as f64 + (t as f64 * 0.7).sin()).collect();
        let series = TimeSeries::new("trend", data);
        let model = fit_css(&series, SarimaOrder::new(1, 1, 0)).unwrap();
        assert_eq!(model.c, 0.0);
        assert_eq!(model.pipeline.length_loss(), 1);
    }

    #[test]
    fn sse_matches_independent_residual_recursion() {
        // Recompute the conditional residuals of the fitted ARMA(1,1) with a
        // direct recursion (no polynomial expansion) and compare against the
        // stored sigma2·m.
        let data = test_sim::arma(&[0.5], &[-0.2], 1.0, 400, 5);
        let series = TimeSeries::new("arma11", data.clone());
        let model = fit_css(&series, SarimaOrder::new(1, 0, 1)).unwrap();
        let mean = series.mean();
        let mut eps = vec![0.0; data.len()];
        let mut sse = 0.0;
        for t in 0..data.len() {
            let prev_z = if t >= 1 { data[t - 1] } else { mean };
            let prev_e = if t >= 1 { eps[t - 1] } else { 0.0 };
            let pred = model.c + model.phi[0] * prev_z + model.theta[0] * prev_e;
            eps[t] = data[t] - pred;
            sse += eps[t] * eps[t];
        }
        let stored = model.sigma2 * data.len() as f64;
        assert!(
            (sse - stored).abs() < 1e-9 * (1.0 + sse),
            "sse = {sse}, stored = {stored}"
        );
    }

    #[test]
    fn css_seasonal_airline_style_order_fits() {
        // A seasonal structure: trend + seasonal pattern + noise, fit with
        // (0,1,1)(0,1,1)_4 — the estimation must converge and return a
        // stationary, invertible model with both differences recorded.
        let data: Vec<f64> = (0..80)
            .map(|t| {
                let season = [10.0, -4.0, 3.0, -9.0][t % 4];
                0.5 * t as f64 + season + ((t * 7 % 13) as f64) * 0.3
            })
            .collect();
        let series = TimeSeries::new("seasonal", data);
        let order = SarimaOrder::seasonal(0, 1, 1, 0, 1, 1, 4);
        let model = fit_css(&series, order).unwrap();
        assert_eq!(model.pipeline.length_loss(), 5);
        assert_eq!(model.theta.len(), 1);
        assert_eq!(model.seasonal_theta.len(), 1);
        let roots = check_roots(&model).unwrap();
        assert!(roots.stationary && roots.invertible);
    }

    #[test]
    fn css_rejects_oversized_orders() {
        let series = TimeSeries::new("tiny", (0..10).map(|t| t as f64).collect());
        assert!(fit_css(&series, SarimaOrder::new(2, 0, 2)).is_err());
    }
}
