//! Box-Jenkins stochastic models: seasonal ARIMA estimation, forecasting,
//! information criteria, root-based stationarity/invertibility checks, and
//! order search with residual diagnostics.
//!
//! The model equation on the differenced scale is
//!
//! ```text
//! φ(L)·Φ(L^s) z_t = c + θ(L)·Θ(L^s) ε_t
//! ```
//!
//! with `φ(L) = 1 − Σ φ_i L^i`, `θ(L) = 1 + Σ θ_j L^j` and the seasonal
//! factors acting at multiples of the period `s`. The multiplicative factors
//! are expanded symbolically (coefficient convolution) before any recursion.

mod estimate;
mod forecast;
mod search;
mod simulate;

pub use estimate::{fit_ar_yule_walker, fit_css};
pub use forecast::forecast;
pub use search::{box_jenkins_search, diagnostic_check, DiagnosticReport, SearchOutcome};
pub use simulate::{simulate_components, simulate_nma, ComponentMode};

use crate::error::{ForecastError, Result};
use crate::numerics::polynomial_roots;
use crate::transform::TransformPipeline;
use serde::{Deserialize, Serialize};

/// Orders of a seasonal ARIMA model `(p,d,q)(P,D,Q)_s`.
///
/// `p`/`q` are the nonseasonal AR/MA orders, `d` the nonseasonal differencing
/// order; `seasonal_p`/`seasonal_q`/`seasonal_d` are their seasonal
/// counterparts acting at lag `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SarimaOrder {
    pub p: usize,
    pub d: usize,
    pub q: usize,
    #[serde(rename = "P")]
    pub seasonal_p: usize,
    #[serde(rename = "D")]
    pub seasonal_d: usize,
    #[serde(rename = "Q")]
    pub seasonal_q: usize,
    pub s: usize,
}

impl SarimaOrder {
    /// Nonseasonal order `(p,d,q)`.
    pub fn new(p: usize, d: usize, q: usize) -> Self {
        SarimaOrder {
            p,
            d,
            q,
            seasonal_p: 0,
            seasonal_d: 0,
            seasonal_q: 0,
            s: 1,
        }
    }

    /// Full seasonal order `(p,d,q)(P,D,Q)_s`.
    pub fn seasonal(
        p: usize,
        d: usize,
        q: usize,
        seasonal_p: usize,
        seasonal_d: usize,
        seasonal_q: usize,
        s: usize,
    ) -> Self {
        SarimaOrder {
            p,
            d,
            q,
            seasonal_p,
            seasonal_d,
            seasonal_q,
            s,
        }
    }

    /// Number of coefficients estimated besides the constant.
    pub fn n_coefficients(&self) -> usize {
        self.p + self.q + self.seasonal_p + self.seasonal_q
    }

    /// Whether a constant term is estimated (only for undifferenced models).
    pub fn includes_constant(&self) -> bool {
        self.d == 0 && self.seasonal_d == 0
    }

    /// Check the internal invariants and compatibility with a training
    /// length.
    pub fn validate(&self, train_len: usize) -> Result<()> {
        if self.s == 0 {
            return Err(ForecastError::InvalidInput(
                "seasonal period s must be at least 1".into(),
            ));
        }
        if self.s == 1 && (self.seasonal_p > 0 || self.seasonal_d > 0 || self.seasonal_q > 0) {
            return Err(ForecastError::InvalidInput(
                "seasonal orders require a period s > 1".into(),
            ));
        }
        let loss = self.d + self.seasonal_d * self.s;
        if loss >= train_len {
            return Err(ForecastError::InvalidInput(format!(
                "differencing consumes {loss} observations but the series has only {train_len}"
            )));
        }
        Ok(())
    }
}

impl std::fmt::Display for SarimaOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.s > 1 {
            write!(
                f,
                "({},{},{})({},{},{})_{}",
                self.p, self.d, self.q, self.seasonal_p, self.seasonal_d, self.seasonal_q, self.s
            )
        } else {
            write!(f, "({},{},{})", self.p, self.d, self.q)
        }
    }
}

/// A fitted seasonal ARIMA model.
///
/// `pipeline` records the differencing steps applied before estimation so
/// forecasts can be mapped back to the undifferenced scale.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SarimaModel {
    pub order: SarimaOrder,
    /// Constant term of the difference equation (0 for differenced models).
    pub c: f64,
    /// Nonseasonal AR coefficients φ_1..φ_p.
    pub phi: Vec<f64>,
    /// Nonseasonal MA coefficients θ_1..θ_q.
    pub theta: Vec<f64>,
    /// Seasonal AR coefficients Φ_1..Φ_P.
    #[serde(rename = "Phi")]
    pub seasonal_phi: Vec<f64>,
    /// Seasonal MA coefficients Θ_1..Θ_Q.
    #[serde(rename = "Theta")]
    pub seasonal_theta: Vec<f64>,
    /// Residual variance (sum of squared one-step residuals / count).
    pub sigma2: f64,
    /// Differencing steps applied before estimation.
    pub pipeline: TransformPipeline,
}

impl SarimaModel {
    /// Coefficients of the expanded AR polynomial `φ(L)·Φ(L^s)`, ascending in
    /// powers of the lag operator, leading coefficient 1.
    pub fn ar_polynomial(&self) -> Vec<f64> {
        expand_pair(&self.phi, &self.seasonal_phi, self.order.s, -1.0)
    }

    /// Coefficients of the expanded MA polynomial `θ(L)·Θ(L^s)`, ascending,
    /// leading coefficient 1.
    pub fn ma_polynomial(&self) -> Vec<f64> {
        expand_pair(&self.theta, &self.seasonal_theta, self.order.s, 1.0)
    }

    /// Serialize to the canonical JSON form.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Deserialize from the canonical JSON form.
    pub fn from_json(json: &str) -> Result<SarimaModel> {
        Ok(serde_json::from_str(json)?)
    }
}

/// Build `(1 + sign·Σ c_i L^i)·(1 + sign·Σ C_k L^{ks})` by coefficient
/// convolution; `sign` is −1 for AR factors and +1 for MA factors.
fn expand_pair(nonseasonal: &[f64], seasonal: &[f64], s: usize, sign: f64) -> Vec<f64> {
    let mut a = vec![0.0; nonseasonal.len() + 1];
    a[0] = 1.0;
    for (i, v) in nonseasonal.iter().enumerate() {
        a[i + 1] = sign * v;
    }
    let mut b = vec![0.0; seasonal.len() * s + 1];
    b[0] = 1.0;
    for (k, v) in seasonal.iter().enumerate() {
        b[(k + 1) * s] = sign * v;
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if *ai == 0.0 {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Margin above the unit circle a root modulus must clear.
pub(crate) const ROOT_MARGIN: f64 = 1e-9;

/// Smallest root modulus of a lag polynomial given by ascending
/// coefficients; +∞ when the polynomial is constant.
pub(crate) fn min_root_modulus(coeffs: &[f64]) -> Result<f64> {
    let roots = polynomial_roots(coeffs)?;
    Ok(roots
        .iter()
        .map(|z| z.norm())
        .fold(f64::INFINITY, f64::min))
}

/// Outcome of the stationarity/invertibility root check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RootCheck {
    /// All AR roots outside the unit circle.
    pub stationary: bool,
    /// All MA roots outside the unit circle.
    pub invertible: bool,
    /// Smallest modulus among the AR polynomial roots (+∞ when pure MA).
    pub min_ar_root_modulus: f64,
    /// Smallest modulus among the MA polynomial roots (+∞ when pure AR).
    pub min_ma_root_modulus: f64,
}

/// Check both characteristic polynomials of a model: the process is flagged
/// stationary/invertible when every root of the expanded AR/MA polynomial
/// lies strictly outside the unit circle (modulus > 1 + 1e-9).
pub fn check_roots(model: &SarimaModel) -> Result<RootCheck> {
    let ar_min = min_root_modulus(&model.ar_polynomial())?;
    let ma_min = min_root_modulus(&model.ma_polynomial())?;
    Ok(RootCheck {
        stationary: ar_min > 1.0 + ROOT_MARGIN,
        invertible: ma_min > 1.0 + ROOT_MARGIN,
        min_ar_root_modulus: ar_min,
        min_ma_root_modulus: ma_min,
    })
}

/// Model-selection criterion used by [`box_jenkins_search`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Criterion {
    Aic,
    Bic,
}

/// Which pair of criterion formulas to evaluate.
///
/// `AsPrinted` follows the source formulas used throughout this library:
/// `AIC = n·ln(sse/n) + 2p` and `BIC = n·ln(sse/n) + p + p·ln(n)`, where
/// `sse` is the sum of squared residuals. `Standard` swaps in the textbook
/// BIC penalty `p·ln(n)` for comparison runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IcForm {
    AsPrinted,
    Standard,
}

/// AIC/BIC values for one fitted model.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriterionScore {
    pub aic: f64,
    pub bic: f64,
    /// Number of estimated parameters.
    pub n_params: usize,
}

impl CriterionScore {
    /// Value of the requested criterion.
    pub fn value(&self, criterion: Criterion) -> f64 {
        match criterion {
            Criterion::Aic => self.aic,
            Criterion::Bic => self.bic,
        }
    }
}

/// Information criteria with a selectable formula pair. `n` is the residual
/// count, `n_params` the number of estimated parameters, `sse` the residual
/// sum of squares.
pub fn information_criteria_with(
    n: usize,
    n_params: usize,
    sse: f64,
    form: IcForm,
) -> Result<CriterionScore> {
    if n == 0 {
        return Err(ForecastError::InvalidInput(
            "information criteria need at least one residual".into(),
        ));
    }
    if !(sse > 0.0) || !sse.is_finite() {
        return Err(ForecastError::InvalidInput(format!(
            "information criteria need a positive finite residual sum of squares, got {sse}"
        )));
    }
    let nf = n as f64;
    let p = n_params as f64;
    let fit = nf * (sse / nf).ln();
    let (aic, bic) = match form {
        IcForm::AsPrinted => (fit + 2.0 * p, fit + p + p * nf.ln()),
        IcForm::Standard => (fit + 2.0 * p, fit + p * nf.ln()),
    };
    Ok(CriterionScore {
        aic,
        bic,
        n_params,
    })
}

/// Information criteria in the default (as-printed) form.
pub fn information_criteria(n: usize, n_params: usize, sse: f64) -> Result<CriterionScore> {
    information_criteria_with(n, n_params, sse, IcForm::AsPrinted)
}

/// A model with zero coefficients everywhere; used as a construction base.
pub(crate) fn empty_model(order: SarimaOrder) -> SarimaModel {
    SarimaModel {
        order,
        c: 0.0,
        phi: vec![0.0; order.p],
        theta: vec![0.0; order.q],
        seasonal_phi: vec![0.0; order.seasonal_p],
        seasonal_theta: vec![0.0; order.seasonal_q],
        sigma2: 1.0,
        pipeline: TransformPipeline::new(),
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    fn plain_ar(phi: Vec<f64>) -> SarimaModel {
        let mut m = empty_model(SarimaOrder::new(phi.len(), 0, 0));
        m.phi = phi;
        m
    }

    #[test]
    fn ar1_half_has_root_at_two() {
        let check = check_roots(&plain_ar(vec![0.5])).unwrap();
        assert!(check.stationary);
        assert!(check.invertible);
        assert!((check.min_ar_root_modulus - 2.0).abs() < 1e-9);
        assert!(check.min_ma_root_modulus.is_infinite());
    }

    #[test]
    fn unit_root_is_flagged_nonstationary() {
        let check = check_roots(&plain_ar(vec![1.0])).unwrap();
        assert!(!check.stationary);
        assert!((check.min_ar_root_modulus - 1.0).abs() < 1e-9);
    }

    #[test]
    fn pure_ma_is_always_stationary() {
        for theta in [-2.5, -0.4, 0.0, 0.4, 2.5] {
            let mut m = empty_model(SarimaOrder::new(0, 0, 1));
            m.theta = vec![theta];
            let check = check_roots(&m).unwrap();
            assert!(check.stationary, "theta={theta}");
        }
    }

    #[test]
    fn seasonal_factor_expands_by_convolution() {
        // (1 − 0.5L)(1 − 0.5L¹²): the seasonal factor contributes roots of
        // modulus 2^(1/12).
        let mut m = empty_model(SarimaOrder::seasonal(1, 0, 0, 1, 0, 0, 12));
        m.phi = vec![0.5];
        m.seasonal_phi = vec![0.5];
        let poly = m.ar_polynomial();
        assert_eq!(poly.len(), 14);
        assert_eq!(poly[0], 1.0);
        assert_eq!(poly[1], -0.5);
        assert_eq!(poly[12], -0.5);
        assert_eq!(poly[13], 0.25);
        let check = check_roots(&m).unwrap();
        assert!(check.stationary);
        let expected = 2.0_f64.powf(1.0 / 12.0);
        assert!((check.min_ar_root_modulus - expected).abs() < 1e-9);
    }

    #[test]
    fn criteria_match_hand_computation() {
        let score = information_criteria(100, 2, 100.0).unwrap();
        // n·ln(sse/n) = 100·ln(1) = 0.
        assert!((score.aic - 4.0).abs() < 1e-12);
        assert!((score.bic - (2.0 + 2.0 * 100.0_f64.ln())).abs() < 1e-12);
        assert!((score.bic - 11.210340371976184).abs() < 1e-12);
    }

    #[test]
    fn criteria_penalties_per_parameter() {
        let n = 250;
        let sse = 17.25;
        for k in 1..6 {
            let lo = information_criteria(n, k, sse).unwrap();
            let hi = information_criteria(n, k + 1, sse).unwrap();
            assert!((hi.aic - lo.aic - 2.0).abs() < 1e-12);
            assert!((hi.bic - lo.bic - (1.0 + (n as f64).ln())).abs() < 1e-12);
        }
    }

    #[test]
    fn standard_form_swaps_bic_penalty() {
        let printed = information_criteria_with(100, 3, 50.0, IcForm::AsPrinted).unwrap();
        let standard = information_criteria_with(100, 3, 50.0, IcForm::Standard).unwrap();
        assert_eq!(printed.aic, standard.aic);
        assert!((printed.bic - standard.bic - 3.0).abs() < 1e-12);
    }

    #[test]
    fn criteria_reject_nonpositive_sse() {
        assert!(information_criteria(10, 1, 0.0).is_err());
        assert!(information_criteria(10, 1, -1.0).is_err());
    }

    #[test]
    fn order_validation() {
        assert!(SarimaOrder::new(1, 0, 1).validate(10).is_ok());
        // Seasonal orders with s = 1 are contradictory.
        let bad = SarimaOrder {
            s: 1,
            ..SarimaOrder::seasonal(0, 0, 0, 1, 0, 0, 4)
        };
        assert!(bad.validate(100).is_err());
        // Differencing must leave at least one observation.
        assert!(SarimaOrder::seasonal(0, 1, 0, 0, 1, 0, 12).validate(13).is_err());
        assert!(SarimaOrder::seasonal(0, 1, 0, 0, 1, 0, 12).validate(14).is_ok());
    }

    #[test]
    fn model_json_uses_capitalized_seasonal_names() {
        let mut m = empty_model(SarimaOrder::seasonal(1, 0, 1, 1, 0, 1, 4));
        m.phi = vec![0.3];
        m.theta = vec![0.1];
        m.seasonal_phi = vec![0.2];
        m.seasonal_theta = vec![-0.1];
        m.c = 1.5;
        let json = m.to_json().unwrap();
        assert!(json.contains("\"Phi\""));
        assert!(json.contains("\"Theta\""));
        assert!(json.contains("\"P\""));
        assert!(json.contains("\"D\""));
        assert!(json.contains("\"Q\""));
        let back = SarimaModel::from_json(&json).unwrap();
        assert_eq!(back.seasonal_phi, vec![0.2]);
        assert_eq!(back.order.s, 4);
        assert_eq!(back.c, 1.5);
    }

    #[test]
    fn display_formats_orders() {
        assert_eq!(SarimaOrder::new(2, 1, 0).to_string(), "(2,1,0)");
        assert_eq!(
            SarimaOrder::seasonal(0, 1, 1, 0, 1, 1, 12).to_string(),
            "(0,1,1)(0,1,1)_12"
        );
    }
}
