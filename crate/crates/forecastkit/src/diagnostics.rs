//! Correlation diagnostics and a unit-root stationarity check.

use crate::error::{ForecastError, Result};
use crate::numerics::{solve_spd, Matrix};
use serde::{Deserialize, Serialize};

/// Default number of lags examined for a series of length `n` (about `n/4`).
pub fn default_max_lag(n: usize) -> usize {
    n / 4
}

/// Large-sample 95% band half-width for sample autocorrelations of white
/// noise: `1.96/√n`.
pub fn confidence_band(n: usize) -> f64 {
    1.96 / (n as f64).sqrt()
}

/// Lagged correlation values (ACF or PACF) with their white-noise band.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorrelogramResult {
    /// Lags `0..=max_lag`.
    pub lags: Vec<usize>,
    /// Correlation value at each lag (index 0 is always 1).
    pub values: Vec<f64>,
    /// 95% confidence half-width `1.96/√n`.
    pub band: f64,
}

impl CorrelogramResult {
    /// Render as CSV with columns `lag,value,band_low,band_high`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lag,value,band_low,band_high\n");
        for (lag, v) in self.lags.iter().zip(&self.values) {
            out.push_str(&format!(
                "{lag},{v:.6},{:.6},{:.6}\n",
                -self.band, self.band
            ));
        }
        out
    }
}

/// Sample autocovariances `c₀..c_max_lag` with the biased divisor `n`:
/// `c_k = (1/n) Σ_t (x_t − x̄)(x_{t+k} − x̄)`.
pub fn acvf(x: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let n = x.len();
    if n < 2 {
        return Err(ForecastError::InvalidInput(
            "autocovariance needs at least two observations".into(),
        ));
    }
    if max_lag >= n {
        return Err(ForecastError::InvalidInput(format!(
            "max lag {max_lag} must be below the series length {n}"
        )));
    }
    let mean = x.iter().sum::<f64>() / n as f64;
    let mut out = Vec::with_capacity(max_lag + 1);
    for k in 0..=max_lag {
        let mut acc = 0.0;
        for t in 0..n - k {
            acc += (x[t] - mean) * (x[t + k] - mean);
        }
        out.push(acc / n as f64);
    }
    Ok(out)
}

/// Sample autocorrelations `r_k = c_k/c₀` for lags `0..=max_lag`.
pub fn acf(x: &[f64], max_lag: usize) -> Result<CorrelogramResult> {
    let values = acf_values(x, max_lag)?;
    Ok(CorrelogramResult {
        lags: (0..=max_lag).collect(),
        values,
        band: confidence_band(x.len()),
    })
}

/// The raw `r₀..r_max_lag` sequence (used internally by the model fitters).
pub fn acf_values(x: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let c = acvf(x, max_lag)?;
    let c0 = c[0];
    if c0 <= 0.0 {
        return Err(ForecastError::InvalidInput(
            "series has zero variance; autocorrelation undefined".into(),
        ));
    }
    Ok(c.iter().map(|ck| ck / c0).collect())
}

/// Partial autocorrelations by the Durbin-Levinson recursion on the sample
/// ACF. Index `k` holds the lag-`k` value, with the lag-0 slot fixed at 1.
pub fn pacf(x: &[f64], max_lag: usize) -> Result<CorrelogramResult> {
    let r = acf_values(x, max_lag)?;
    let mut values = vec![1.0];
    if max_lag >= 1 {
        // phi[j-1] holds φ_{k,j} for the current order k.
        let mut phi = vec![r[1]];
        values.push(r[1]);
        for k in 2..=max_lag {
            let num = r[k] - (1..k).map(|j| phi[j - 1] * r[k - j]).sum::<f64>();
            let den = 1.0 - (1..k).map(|j| phi[j - 1] * r[j]).sum::<f64>();
            if den == 0.0 || !den.is_finite() {
                return Err(ForecastError::Singular(format!(
                    "partial autocorrelation recursion broke down at lag {k}"
                )));
            }
            let phi_kk = num / den;
            let prev = phi.clone();
            phi = (1..k)
                .map(|j| prev[j - 1] - phi_kk * prev[k - j - 1])
                .collect();
            phi.push(phi_kk);
            values.push(phi_kk);
        }
    }
    Ok(CorrelogramResult {
        lags: (0..=max_lag).collect(),
        values,
        band: confidence_band(x.len()),
    })
}

/// Verdict of the unit-root regression test.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StationarityVerdict {
    /// t-ratio of the lagged-level coefficient in `Δx_t = α + β·x_{t−1} + ε`.
    pub test_statistic: f64,
    /// 5% critical value of the left-tailed test.
    pub critical_value: f64,
    /// True when the statistic falls below the critical value.
    pub stationary: bool,
    /// Number of regression observations.
    pub n_obs: usize,
}

/// Unit-root test: regress the first difference on an intercept and the
/// lagged level, and compare the slope's t-ratio against the 5% critical
/// value −2.86. Statistics below the critical value reject a unit root.
pub fn dickey_fuller(x: &[f64]) -> Result<StationarityVerdict> {
    let n = x.len();
    if n < 10 {
        return Err(ForecastError::InvalidInput(
            "unit-root test needs at least ten observations".into(),
        ));
    }
    let m = n - 1;
    // Normal equations for the 2-parameter regression.
    let mut xtx = Matrix::zeros(2, 2);
    let mut xty = [0.0; 2];
    for t in 0..m {
        let row = [1.0, x[t]];
        let y = x[t + 1] - x[t];
        for i in 0..2 {
            for j in 0..2 {
                xtx[(i, j)] += row[i] * row[j];
            }
            xty[i] += row[i] * y;
        }
    }
    let beta = solve_spd(&xtx, &xty)?;
    let mut rss = 0.0;
    for t in 0..m {
        let resid = (x[t + 1] - x[t]) - beta[0] - beta[1] * x[t];
        rss += resid * resid;
    }
    let s2 = rss / (m - 2) as f64;
    if !(s2.is_finite() && s2 > 0.0) {
        return Err(ForecastError::Singular(
            "degenerate unit-root regression (zero residual variance)".into(),
        ));
    }
    // Var(β̂₁) = s²·[(XᵀX)⁻¹]₁₁; for the 2×2 case invert directly.
    let det = xtx[(0, 0)] * xtx[(1, 1)] - xtx[(0, 1)] * xtx[(1, 0)];
    let inv11 = xtx[(0, 0)] / det;
    let se = (s2 * inv11).sqrt();
    let test_statistic = beta[1] / se;
    let critical_value = -2.86;
    Ok(StationarityVerdict {
        test_statistic,
        critical_value,
        stationary: test_statistic < critical_value,
        n_obs: m,
    })
}
