//! Invertible preprocessing transforms.
//!
//! A [`TransformPipeline`] is an ordered list of steps applied to a series
//! before fitting. Each step records whatever state it needs during
//! [`TransformPipeline::apply`] so that forecasts produced on the transformed
//! scale can be mapped back with [`TransformPipeline::invert`]. Differencing
//! steps shorten the series and remember their tail values, which lets
//! `invert` handle both a full-length round trip and the continuation case
//! where the input is a block of forecasts that extends the training sample.

use crate::error::{ForecastError, Result};
use serde::{Deserialize, Serialize};

/// One invertible preprocessing step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TransformStep {
    /// Base-10 logarithm. Requires strictly positive input.
    Log10,
    /// Natural logarithm. Requires strictly positive input.
    NaturalLog,
    /// Division by a fixed constant.
    ScaleDivide { divisor: f64 },
    /// Affine map of the observed range onto `[lo, hi]`. The source range is
    /// recorded when the step is applied.
    RangeRescale {
        lo: f64,
        hi: f64,
        #[serde(default)]
        src_min: Option<f64>,
        #[serde(default)]
        src_max: Option<f64>,
    },
    /// Power transform `(x^λ − 1)/λ` (natural log when `λ = 0`). Requires
    /// strictly positive input.
    BoxCox { lambda: f64 },
    /// Lag-`lag` differencing `y[t] = x[t+lag] − x[t]`. The final `lag`
    /// input values and the output length are recorded when applied.
    Difference {
        lag: usize,
        #[serde(default)]
        tail: Vec<f64>,
        #[serde(default)]
        output_len: usize,
    },
}

impl TransformStep {
    /// Division step.
    pub fn scale_divide(divisor: f64) -> Self {
        TransformStep::ScaleDivide { divisor }
    }

    /// Range-mapping step with unrecorded source range.
    pub fn range_rescale(lo: f64, hi: f64) -> Self {
        TransformStep::RangeRescale {
            lo,
            hi,
            src_min: None,
            src_max: None,
        }
    }

    /// Differencing step with unrecorded state.
    pub fn difference(lag: usize) -> Self {
        TransformStep::Difference {
            lag,
            tail: Vec::new(),
            output_len: 0,
        }
    }

    /// True for steps that map each value independently of its neighbors.
    pub fn is_pointwise(&self) -> bool {
        !matches!(self, TransformStep::Difference { .. })
    }

    fn apply(&mut self, x: &[f64]) -> Result<Vec<f64>> {
        match self {
            TransformStep::Log10 => {
                require_positive(x, "log10")?;
                Ok(x.iter().map(|v| v.log10()).collect())
            }
            TransformStep::NaturalLog => {
                require_positive(x, "natural log")?;
                Ok(x.iter().map(|v| v.ln()).collect())
            }
            TransformStep::ScaleDivide { divisor } => {
                if *divisor == 0.0 || !divisor.is_finite() {
                    return Err(ForecastError::InvalidInput(
                        "scale divisor must be finite and nonzero".into(),
                    ));
                }
                let d = *divisor;
                Ok(x.iter().map(|v| v / d).collect())
            }
            TransformStep::RangeRescale {
                lo,
                hi,
                src_min,
                src_max,
            } => {
                if x.is_empty() {
                    return Err(ForecastError::InvalidInput(
                        "cannot rescale an empty series".into(),
                    ));
                }
                let mn = x.iter().cloned().fold(f64::INFINITY, f64::min);
                let mx = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                if mn == mx {
                    return Err(ForecastError::InvalidInput(
                        "cannot rescale a constant series".into(),
                    ));
                }
                if *hi == *lo {
                    return Err(ForecastError::InvalidInput(
                        "rescale target range is degenerate".into(),
                    ));
                }
                *src_min = Some(mn);
                *src_max = Some(mx);
                let (lo, hi) = (*lo, *hi);
                Ok(x.iter()
                    .map(|v| lo + (v - mn) * (hi - lo) / (mx - mn))
                    .collect())
            }
            TransformStep::BoxCox { lambda } => {
                require_positive(x, "power transform")?;
                let l = *lambda;
                if l == 0.0 {
                    Ok(x.iter().map(|v| v.ln()).collect())
                } else {
                    Ok(x.iter().map(|v| (v.powf(l) - 1.0) / l).collect())
                }
            }
            TransformStep::Difference {
                lag,
                tail,
                output_len,
            } => {
                let l = *lag;
                if l == 0 {
                    return Err(ForecastError::InvalidInput(
                        "differencing lag must be at least 1".into(),
                    ));
                }
                if x.len() <= l {
                    return Err(ForecastError::InvalidInput(format!(
                        "series of length {} is too short to difference at lag {l}",
                        x.len()
                    )));
                }
                *tail = x[x.len() - l..].to_vec();
                *output_len = x.len() - l;
                Ok((0..x.len() - l).map(|t| x[t + l] - x[t]).collect())
            }
        }
    }

    fn invert(&self, y: &[f64]) -> Result<Vec<f64>> {
        match self {
            TransformStep::Log10 => Ok(y.iter().map(|v| 10f64.powf(*v)).collect()),
            TransformStep::NaturalLog => Ok(y.iter().map(|v| v.exp()).collect()),
            TransformStep::ScaleDivide { divisor } => {
                Ok(y.iter().map(|v| v * divisor).collect())
            }
            TransformStep::RangeRescale {
                lo,
                hi,
                src_min,
                src_max,
            } => {
                let (mn, mx) = recorded_range(*src_min, *src_max)?;
                let (lo, hi) = (*lo, *hi);
                Ok(y.iter()
                    .map(|v| mn + (v - lo) * (mx - mn) / (hi - lo))
                    .collect())
            }
            TransformStep::BoxCox { lambda } => {
                let l = *lambda;
                if l == 0.0 {
                    Ok(y.iter().map(|v| v.exp()).collect())
                } else {
                    let mut out = Vec::with_capacity(y.len());
                    for v in y {
                        let base = l * v + 1.0;
                        if base <= 0.0 {
                            return Err(ForecastError::InvalidInput(
                                "power-transform inverse undefined for this value".into(),
                            ));
                        }
                        out.push(base.powf(1.0 / l));
                    }
                    Ok(out)
                }
            }
            TransformStep::Difference {
                lag,
                tail,
                output_len,
            } => {
                let l = *lag;
                if tail.len() != l {
                    return Err(ForecastError::InvalidInput(
                        "differencing step has no recorded state; apply it first".into(),
                    ));
                }
                if y.len() == *output_len {
                    // Full-length round trip: reconstruct the original series
                    // backward from the recorded tail.
                    let n = output_len + l;
                    let mut out = vec![0.0; n];
                    out[n - l..].copy_from_slice(tail);
                    for t in (0..n - l).rev() {
                        out[t] = out[t + l] - y[t];
                    }
                    Ok(out)
                } else {
                    // Continuation: `y` extends the differenced training
                    // sample, so integrate forward from the tail.
                    let mut out = Vec::with_capacity(y.len());
                    for (k, v) in y.iter().enumerate() {
                        let prev = if k < l { tail[k] } else { out[k - l] };
                        out.push(v + prev);
                    }
                    Ok(out)
                }
            }
        }
    }

    fn reapply(&self, x: &[f64]) -> Result<Vec<f64>> {
        match self {
            TransformStep::Log10 => {
                require_positive(x, "log10")?;
                Ok(x.iter().map(|v| v.log10()).collect())
            }
            TransformStep::NaturalLog => {
                require_positive(x, "natural log")?;
                Ok(x.iter().map(|v| v.ln()).collect())
            }
            TransformStep::ScaleDivide { divisor } => {
                Ok(x.iter().map(|v| v / divisor).collect())
            }
            TransformStep::RangeRescale {
                lo,
                hi,
                src_min,
                src_max,
            } => {
                let (mn, mx) = recorded_range(*src_min, *src_max)?;
                let (lo, hi) = (*lo, *hi);
                Ok(x.iter()
                    .map(|v| lo + (v - mn) * (hi - lo) / (mx - mn))
                    .collect())
            }
            TransformStep::BoxCox { lambda } => {
                require_positive(x, "power transform")?;
                let l = *lambda;
                if l == 0.0 {
                    Ok(x.iter().map(|v| v.ln()).collect())
                } else {
                    Ok(x.iter().map(|v| (v.powf(l) - 1.0) / l).collect())
                }
            }
            TransformStep::Difference { .. } => Err(ForecastError::InvalidInput(
                "cannot replay a differencing step on new values".into(),
            )),
        }
    }
}

fn require_positive(x: &[f64], what: &str) -> Result<()> {
    if let Some(v) = x.iter().find(|v| **v <= 0.0 || !v.is_finite()) {
        return Err(ForecastError::InvalidInput(format!(
            "{what} requires strictly positive values (found {v})"
        )));
    }
    Ok(())
}

fn recorded_range(src_min: Option<f64>, src_max: Option<f64>) -> Result<(f64, f64)> {
    match (src_min, src_max) {
        (Some(mn), Some(mx)) if mn != mx => Ok((mn, mx)),
        _ => Err(ForecastError::InvalidInput(
            "rescale step has no recorded source range; apply it first".into(),
        )),
    }
}

/// Ordered list of transform steps applied before fitting.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TransformPipeline {
    pub steps: Vec<TransformStep>,
}

impl TransformPipeline {
    /// Empty pipeline (identity).
    pub fn new() -> Self {
        TransformPipeline { steps: Vec::new() }
    }

    /// Pipeline from a list of steps.
    pub fn from_steps(steps: Vec<TransformStep>) -> Self {
        TransformPipeline { steps }
    }

    /// Append a step.
    pub fn push(&mut self, step: TransformStep) {
        self.steps.push(step);
    }

    /// Number of observations consumed by differencing across the pipeline.
    pub fn length_loss(&self) -> usize {
        self.steps
            .iter()
            .map(|s| match s {
                TransformStep::Difference { lag, .. } => *lag,
                _ => 0,
            })
            .sum()
    }

    /// True when every step maps values independently (no differencing).
    pub fn is_pointwise(&self) -> bool {
        self.steps.iter().all(TransformStep::is_pointwise)
    }

    /// Apply every step in order, recording state as needed.
    pub fn apply(&mut self, x: &[f64]) -> Result<Vec<f64>> {
        let mut cur = x.to_vec();
        for step in &mut self.steps {
            cur = step.apply(&cur)?;
        }
        Ok(cur)
    }

    /// Undo every step in reverse order. For differencing steps the input
    /// length selects between a full-length reconstruction and forward
    /// integration of a forecast continuation.
    pub fn invert(&self, y: &[f64]) -> Result<Vec<f64>> {
        let mut cur = y.to_vec();
        for step in self.steps.iter().rev() {
            cur = step.invert(&cur)?;
        }
        Ok(cur)
    }

    /// Re-run the pointwise steps on new values using the state recorded at
    /// apply time. Fails if the pipeline contains differencing.
    pub fn reapply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut cur = x.to_vec();
        for step in &self.steps {
            cur = step.reapply(&cur)?;
        }
        Ok(cur)
    }
}

/// Fractional differencing `(1−B)^d` by the truncated binomial expansion
/// with weights `π₀ = 1, π_k = π_{k−1}·(k−1−d)/k`.
///
/// The kernel is cut off after `truncation` terms and the first `truncation`
/// outputs (which would need presample values) are dropped, so the result has
/// `len − truncation` points: `y[t] = Σ_{k=0}^{truncation} π_k·x[t−k]`.
/// Integer orders reproduce ordinary differencing; `d = 1, truncation = 1`
/// yields exactly `y[t] = x[t] − x[t−1]`.
pub fn fractional_difference(x: &[f64], d: f64, truncation: usize) -> Result<Vec<f64>> {
    if !d.is_finite() {
        return Err(ForecastError::InvalidInput(
            "fractional differencing order must be finite".into(),
        ));
    }
    let n = x.len();
    if n == 0 || truncation > n - 1 {
        return Err(ForecastError::InvalidInput(format!(
            "truncation {truncation} must be at most the series length {n} minus one"
        )));
    }
    let mut pi = vec![1.0_f64];
    for k in 1..=truncation {
        pi.push(pi[k - 1] * ((k as f64 - 1.0 - d) / k as f64));
    }
    let mut out = Vec::with_capacity(n - truncation);
    for t in truncation..n {
        // Start from the π₀ term so that short kernels stay exact
        // (π₀ = 1 makes the first term bitwise equal to x[t]).
        let mut acc = x[t];
        for (k, w) in pi.iter().enumerate().skip(1) {
            acc += w * x[t - k];
        }
        out.push(acc);
    }
    Ok(out)
}
