//! Least-squares support vector regression with an RBF kernel, its online
//! sliding-window variant (incremental add/prune of the maintained system
//! inverse), and hyper-parameter grid search.
//!
//! Training solves the bordered linear system
//!
//! ```text
//! [ 0   1ᵀ        ] [ b ]   [ 0 ]
//! [ 1   Ω + γ⁻¹I  ] [ α ] = [ y ]
//! ```
//!
//! where `Ω(i,j) = K(x_i, x_j)`; predictions are `ŷ(x) = Σ α_i K(x, x_i) + b`.

use crate::error::{ForecastError, Result};
use crate::numerics::{invert, relative_residual, solve_general, Matrix};
use crate::series::TimeSeries;
use serde::{Deserialize, Serialize};

/// Gaussian similarity kernel `K(x,y) = exp(−‖x−y‖²/2σ²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RbfKernel {
    pub sigma: f64,
}

impl RbfKernel {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(ForecastError::InvalidInput(format!(
                "kernel width must be positive and finite, got {sigma}"
            )));
        }
        Ok(RbfKernel { sigma })
    }

    /// Evaluate the kernel; the squared distance is accumulated first so
    /// extreme widths stay overflow-safe.
    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        if x.len() != y.len() {
            return Err(ForecastError::InvalidInput(format!(
                "kernel arguments have dimensions {} and {}",
                x.len(),
                y.len()
            )));
        }
        let d2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
        Ok((-d2 / (2.0 * self.sigma * self.sigma)).exp())
    }
}

/// Embedding geometry: input dimension `n` and window size (number of
/// stored input vectors) `size`. When built from a training span the two
/// satisfy `n + size = training length`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowConfig {
    /// Input vector dimension (number of embedding lags).
    pub n: usize,
    /// Number of input vectors kept in the window.
    pub size: usize,
}

impl WindowConfig {
    pub fn new(n: usize, size: usize) -> Self {
        WindowConfig { n, size }
    }

    /// The window that spans a whole training set: `size = train_len − n`.
    pub fn spanning(n: usize, train_len: usize) -> Result<Self> {
        if n == 0 || train_len <= n + 1 {
            return Err(ForecastError::InvalidInput(format!(
                "cannot embed {train_len} observations with dimension {n}"
            )));
        }
        Ok(WindowConfig {
            n,
            size: train_len - n,
        })
    }
}

/// Build the last `config.size` (input window, next value) pairs of the
/// series: input `i` is `(x_i, …, x_{i+n−1})` and its target is `x_{i+n}`.
pub fn embed(series: &TimeSeries, config: &WindowConfig) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let len = series.len();
    let (n, count) = (config.n, config.size);
    if n == 0 || count == 0 {
        return Err(ForecastError::InvalidInput(
            "embedding needs n ≥ 1 and a window of at least one pattern".into(),
        ));
    }
    if len < n + count {
        return Err(ForecastError::InvalidInput(format!(
            "series of length {len} cannot provide {count} windows of dimension {n}"
        )));
    }
    let start = len - n - count;
    let mut inputs = Vec::with_capacity(count);
    let mut targets = Vec::with_capacity(count);
    for i in start..start + count {
        inputs.push(series.values[i..i + n].to_vec());
        targets.push(series.values[i + n]);
    }
    Ok((inputs, targets))
}

/// A fitted least-squares support vector regression model.
#[derive(Debug, Clone)]
pub struct LssvmModel {
    pub kernel: RbfKernel,
    /// Regularization weight (the cost constant of the error term).
    pub gamma: f64,
    pub inputs: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
    /// Dual coefficients, one per stored input.
    pub alpha: Vec<f64>,
    /// Bias term.
    pub b: f64,
    /// Maintained inverse of the bordered system matrix.
    q_inverse: Matrix,
}

/// Kernel Gram matrix of a point set.
pub(crate) fn kernel_matrix(inputs: &[Vec<f64>], kernel: &RbfKernel) -> Result<Matrix> {
    let n = inputs.len();
    let mut omega = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let k = kernel.eval(&inputs[i], &inputs[j])?;
            omega[(i, j)] = k;
            omega[(j, i)] = k;
        }
    }
    Ok(omega)
}

/// The bordered system matrix `[[0, 1ᵀ],[1, Ω + γ⁻¹I]]` and right-hand side
/// `[0; y]`.
fn bordered_system(
    inputs: &[Vec<f64>],
    targets: &[f64],
    gamma: f64,
    kernel: &RbfKernel,
) -> Result<(Matrix, Vec<f64>)> {
    let n = inputs.len();
    let omega = kernel_matrix(inputs, kernel)?;
    let mut q = Matrix::zeros(n + 1, n + 1);
    for i in 0..n {
        q[(0, i + 1)] = 1.0;
        q[(i + 1, 0)] = 1.0;
        for j in 0..n {
            q[(i + 1, j + 1)] = omega[(i, j)];
        }
        q[(i + 1, i + 1)] += 1.0 / gamma;
    }
    let mut rhs = Vec::with_capacity(n + 1);
    rhs.push(0.0);
    rhs.extend_from_slice(targets);
    Ok((q, rhs))
}

/// Recover `(b, α)` from a bordered-system inverse and the targets.
fn dual_from_inverse(q_inverse: &Matrix, targets: &[f64]) -> (f64, Vec<f64>) {
    let mut rhs = Vec::with_capacity(targets.len() + 1);
    rhs.push(0.0);
    rhs.extend_from_slice(targets);
    let v = q_inverse.matvec(&rhs);
    (v[0], v[1..].to_vec())
}

/// Fit an LS-SVM on explicit (input, target) pairs.
pub fn fit_lssvm(
    inputs: &[Vec<f64>],
    targets: &[f64],
    gamma: f64,
    kernel: &RbfKernel,
) -> Result<LssvmModel> {
    if inputs.len() != targets.len() {
        return Err(ForecastError::InvalidInput(format!(
            "{} inputs but {} targets",
            inputs.len(),
            targets.len()
        )));
    }
    if inputs.len() < 2 {
        return Err(ForecastError::InvalidInput(
            "least-squares SVM needs at least two training points".into(),
        ));
    }
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(ForecastError::InvalidInput(format!(
            "regularization constant must be positive and finite, got {gamma}"
        )));
    }
    let dim = inputs[0].len();
    if inputs.iter().any(|x| x.len() != dim) {
        return Err(ForecastError::InvalidInput(
            "all input vectors must share one dimension".into(),
        ));
    }
    let (q, rhs) = bordered_system(inputs, targets, gamma, kernel)?;
    let solution = solve_general(&q, &rhs)?;
    let q_inverse = invert(&q)?;
    Ok(LssvmModel {
        kernel: *kernel,
        gamma,
        inputs: inputs.to_vec(),
        targets: targets.to_vec(),
        alpha: solution[1..].to_vec(),
        b: solution[0],
        q_inverse,
    })
}

impl LssvmModel {
    /// Number of stored points.
    pub fn window_len(&self) -> usize {
        self.inputs.len()
    }

    /// The maintained inverse of the bordered system matrix.
    pub fn q_inverse(&self) -> &Matrix {
        &self.q_inverse
    }

    /// Evaluate `ŷ(x) = Σ α_i K(x, x_i) + b`.
    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        let dim = self.inputs[0].len();
        if x.len() != dim {
            return Err(ForecastError::InvalidInput(format!(
                "query has dimension {} but the model stores dimension {dim}",
                x.len()
            )));
        }
        let mut y = self.b;
        for (xi, a) in self.inputs.iter().zip(&self.alpha) {
            y += a * self.kernel.eval(x, xi)?;
        }
        Ok(y)
    }

    /// Relative max-norm residual of the bordered system at the stored
    /// solution — the fit-quality invariant of the model.
    pub fn system_residual(&self) -> Result<f64> {
        let (q, rhs) = bordered_system(&self.inputs, &self.targets, self.gamma, &self.kernel)?;
        let mut x = Vec::with_capacity(self.alpha.len() + 1);
        x.push(self.b);
        x.extend_from_slice(&self.alpha);
        Ok(relative_residual(&q, &x, &rhs))
    }

    /// Serialize to the canonical JSON form (the system inverse is rebuilt
    /// on load, not stored).
    pub fn to_json(&self) -> Result<String> {
        let doc = LssvmJson {
            sigma: self.kernel.sigma,
            gamma: self.gamma,
            n: self.inputs[0].len(),
            inputs: self.inputs.clone(),
            targets: self.targets.clone(),
            alpha: self.alpha.clone(),
            b: self.b,
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    /// Reload from the canonical JSON form, rebuilding the maintained
    /// inverse.
    pub fn from_json(json: &str) -> Result<LssvmModel> {
        let doc: LssvmJson = serde_json::from_str(json)?;
        if doc.inputs.len() != doc.targets.len() || doc.inputs.len() != doc.alpha.len() {
            return Err(ForecastError::InvalidInput(
                "stored inputs, targets, and dual coefficients disagree in length".into(),
            ));
        }
        if doc.inputs.iter().any(|x| x.len() != doc.n) {
            return Err(ForecastError::InvalidInput(
                "stored input vectors do not match the declared dimension".into(),
            ));
        }
        let kernel = RbfKernel::new(doc.sigma)?;
        let (q, _) = bordered_system(&doc.inputs, &doc.targets, doc.gamma, &kernel)?;
        let q_inverse = invert(&q)?;
        Ok(LssvmModel {
            kernel,
            gamma: doc.gamma,
            inputs: doc.inputs,
            targets: doc.targets,
            alpha: doc.alpha,
            b: doc.b,
            q_inverse,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct LssvmJson {
    sigma: f64,
    gamma: f64,
    n: usize,
    inputs: Vec<Vec<f64>>,
    targets: Vec<f64>,
    alpha: Vec<f64>,
    b: f64,
}

/// Grow the window by one (input, target) pair, updating the maintained
/// inverse with the rank-one block (matrix-inversion-lemma) formula rather
/// than refactoring the whole system. The dual coefficients are then
/// re-derived exactly as `Q⁻¹·[0; y]`.
pub fn dlssvm_add(model: &LssvmModel, x_new: &[f64], y_new: f64) -> Result<LssvmModel> {
    let dim = model.inputs[0].len();
    if x_new.len() != dim {
        return Err(ForecastError::InvalidInput(format!(
            "new point has dimension {} but the window stores dimension {dim}",
            x_new.len()
        )));
    }
    let size = model.inputs.len() + 1; // bordered dimension before the add
    let mut k = Vec::with_capacity(size);
    k.push(1.0);
    for xi in &model.inputs {
        k.push(model.kernel.eval(x_new, xi)?);
    }
    // Self-similarity of the RBF kernel is 1, so the new diagonal entry is
    // γ⁻¹ + 1.
    let k_star = 1.0 / model.gamma + 1.0;
    let u = model.q_inverse.matvec(&k);
    let rho = k_star - k.iter().zip(&u).map(|(a, b)| a * b).sum::<f64>();
    if rho.abs() < 1e-12 {
        return Err(ForecastError::RankDeficient(format!(
            "window update pivot ρ = {rho:e} is numerically zero"
        )));
    }
    let mut qi = Matrix::zeros(size + 1, size + 1);
    for i in 0..size {
        for j in 0..size {
            qi[(i, j)] = model.q_inverse[(i, j)] + u[i] * u[j] / rho;
        }
        qi[(i, size)] = -u[i] / rho;
        qi[(size, i)] = -u[i] / rho;
    }
    qi[(size, size)] = 1.0 / rho;

    let mut inputs = model.inputs.clone();
    inputs.push(x_new.to_vec());
    let mut targets = model.targets.clone();
    targets.push(y_new);
    let (b, alpha) = dual_from_inverse(&qi, &targets);
    Ok(LssvmModel {
        kernel: model.kernel,
        gamma: model.gamma,
        inputs,
        targets,
        alpha,
        b,
        q_inverse: qi,
    })
}

/// Drop the oldest stored point: the maintained inverse is permuted so the
/// departing point sits last, then deflated by the Schur-complement formula
/// `Q̂⁻¹ = Q* − P·Pᵀ/q`. The dual coefficients are re-derived from the
/// reduced inverse.
pub fn dlssvm_prune(model: &LssvmModel) -> Result<LssvmModel> {
    let count = model.inputs.len();
    if count < 3 {
        return Err(ForecastError::InvalidInput(format!(
            "pruning needs a window of at least 3 points, have {count}"
        )));
    }
    let size = count + 1; // bordered dimension
    // Permutation moving bordered index 1 (the oldest data point) to the
    // end; a symmetric permutation of Q permutes its inverse identically.
    let order: Vec<usize> = std::iter::once(0)
        .chain(2..size)
        .chain(std::iter::once(1))
        .collect();
    let mut permuted = Matrix::zeros(size, size);
    for i in 0..size {
        for j in 0..size {
            permuted[(i, j)] = model.q_inverse[(order[i], order[j])];
        }
    }
    let q = permuted[(size - 1, size - 1)];
    if q.abs() < 1e-12 {
        return Err(ForecastError::RankDeficient(format!(
            "pruning pivot q = {q:e} is numerically zero"
        )));
    }
    let mut qi = Matrix::zeros(size - 1, size - 1);
    for i in 0..size - 1 {
        for j in 0..size - 1 {
            qi[(i, j)] = permuted[(i, j)] - permuted[(i, size - 1)] * permuted[(size - 1, j)] / q;
        }
    }
    let inputs = model.inputs[1..].to_vec();
    let targets = model.targets[1..].to_vec();
    let (b, alpha) = dual_from_inverse(&qi, &targets);
    Ok(LssvmModel {
        kernel: model.kernel,
        gamma: model.gamma,
        inputs,
        targets,
        alpha,
        b,
        q_inverse: qi,
    })
}

/// How [`rolling_forecast`] advances past the end of the training span.
#[derive(Debug, Clone, Copy)]
pub enum RollingMode<'a> {
    /// One-step-ahead evaluation: after each prediction the true value is
    /// revealed, added to the window, and the oldest point is pruned.
    Evaluation(&'a [f64]),
    /// Pure forecasting: each prediction is fed back as an input for the
    /// next step; the fitted window is left unchanged.
    Recursive,
}

fn refit(model: &LssvmModel) -> Result<LssvmModel> {
    fit_lssvm(&model.inputs, &model.targets, model.gamma, &model.kernel)
}

/// Fit on the training span of `series` and produce `horizon` one-step
/// predictions, advancing per `mode`. On a rank-deficient incremental
/// update the window is rebuilt from scratch instead.
pub fn rolling_forecast(
    series: &TimeSeries,
    config: &WindowConfig,
    gamma: f64,
    kernel: &RbfKernel,
    horizon: usize,
    mode: RollingMode<'_>,
) -> Result<Vec<f64>> {
    if horizon == 0 {
        return Err(ForecastError::InvalidInput(
            "forecast horizon must be at least 1".into(),
        ));
    }
    let (inputs, targets) = embed(series, config)?;
    let mut model = fit_lssvm(&inputs, &targets, gamma, kernel)?;
    let mut history = series.values.clone();
    let mut out = Vec::with_capacity(horizon);
    match mode {
        RollingMode::Recursive => {
            for _ in 0..horizon {
                let window = history[history.len() - config.n..].to_vec();
                let y = model.predict(&window)?;
                history.push(y);
                out.push(y);
            }
        }
        RollingMode::Evaluation(actuals) => {
            if actuals.len() < horizon {
                return Err(ForecastError::InvalidInput(format!(
                    "evaluation mode needs {horizon} true values, got {}",
                    actuals.len()
                )));
            }
            for &truth in actuals.iter().take(horizon) {
                let window = history[history.len() - config.n..].to_vec();
                out.push(model.predict(&window)?);
                model = match dlssvm_add(&model, &window, truth) {
                    Ok(m) => m,
                    Err(ForecastError::RankDeficient(_)) => {
                        let mut grown = model.clone();
                        grown.inputs.push(window.clone());
                        grown.targets.push(truth);
                        refit(&grown)?
                    }
                    Err(e) => return Err(e),
                };
                model = match dlssvm_prune(&model) {
                    Ok(m) => m,
                    Err(ForecastError::RankDeficient(_)) => {
                        let mut shrunk = model.clone();
                        shrunk.inputs.remove(0);
                        shrunk.targets.remove(0);
                        refit(&shrunk)?
                    }
                    Err(e) => return Err(e),
                };
                // On near-singular systems (very wide kernels) the rank-one
                // updates lose accuracy that the inverse then carries
                // forward; rebuild from scratch whenever the maintained
                // solution drifts off the fit contract.
                if model.system_residual()? > 1e-8 {
                    model = refit(&model)?;
                }
                history.push(truth);
            }
        }
    }
    Ok(out)
}

/// Winner of a hyper-parameter grid search.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridSearchResult {
    pub sigma: f64,
    pub gamma: f64,
    /// Input dimension.
    pub n: usize,
    /// Window size for the final model: training length − n.
    pub window_size: usize,
    /// One-step mean squared error on the held-out validation span.
    pub validation_mse: f64,
}

/// Validation score of one candidate: fit on the first 80% of the series
/// and measure one-step-ahead MSE over the held-out last ⌈20%⌉.
pub(crate) fn holdout_mse(series: &TimeSeries, sigma: f64, gamma: f64, n: usize) -> Result<f64> {
    let len = series.len();
    let holdout = len.div_ceil(5);
    let fit_len = len - holdout;
    if fit_len < n + 2 {
        return Err(ForecastError::InvalidInput(format!(
            "validation split of {fit_len} points cannot embed dimension {n}"
        )));
    }
    let kernel = RbfKernel::new(sigma)?;
    let config = WindowConfig::spanning(n, fit_len)?;
    let fit_span = TimeSeries::new(
        format!("{}[..{fit_len}]", series.label),
        series.values[..fit_len].to_vec(),
    );
    let actuals = &series.values[fit_len..];
    let preds = rolling_forecast(
        &fit_span,
        &config,
        gamma,
        &kernel,
        holdout,
        RollingMode::Evaluation(actuals),
    )?;
    let mse = preds
        .iter()
        .zip(actuals)
        .map(|(p, a)| (p - a) * (p - a))
        .sum::<f64>()
        / holdout as f64;
    Ok(mse)
}

/// Search the Cartesian grid of kernel widths, regularization constants,
/// and embedding dimensions by rolling-origin validation (last ⌈20%⌉ of the
/// series as a one-step test). Ties break toward the smaller
/// `(σ, γ, n)`. The `folds` argument is reserved for k-block validation
/// variants and is currently ignored.
pub fn grid_search(
    series: &TimeSeries,
    sigma_grid: &[f64],
    gamma_grid: &[f64],
    n_grid: &[usize],
    _folds: usize,
) -> Result<GridSearchResult> {
    if sigma_grid.is_empty() || gamma_grid.is_empty() || n_grid.is_empty() {
        return Err(ForecastError::InvalidInput(
            "grid search needs nonempty grids for σ, γ, and n".into(),
        ));
    }
    let mut failures: Vec<String> = Vec::new();
    let mut best: Option<(f64, f64, f64, usize)> = None;
    for &sigma in sigma_grid {
        for &gamma in gamma_grid {
            for &n in n_grid {
                let mse = match holdout_mse(series, sigma, gamma, n) {
                    Ok(v) => v,
                    Err(e) => {
                        failures.push(format!("σ={sigma}, γ={gamma}, n={n}: {e}"));
                        continue;
                    }
                };
                let better = match &best {
                    None => true,
                    Some((best_mse, bs, bg, bn)) => match mse.total_cmp(best_mse) {
                        std::cmp::Ordering::Less => true,
                        std::cmp::Ordering::Greater => false,
                        std::cmp::Ordering::Equal => {
                            (sigma, gamma, n) < (*bs, *bg, *bn)
                        }
                    },
                };
                if better {
                    best = Some((mse, sigma, gamma, n));
                }
            }
        }
    }
    match best {
        Some((mse, sigma, gamma, n)) => Ok(GridSearchResult {
            sigma,
            gamma,
            n,
            window_size: series.len() - n,
            validation_mse: mse,
        }),
        None => Err(ForecastError::OptimFailure(format!(
            "every grid candidate failed validation: [{}]",
            failures.join("; ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::distributions::{Distribution, Uniform};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_patterns(count: usize, dim: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<f64>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dist = Uniform::new(-1.0, 1.0);
        let inputs: Vec<Vec<f64>> = (0..count)
            .map(|_| (0..dim).map(|_| dist.sample(&mut rng)).collect())
            .collect();
        let targets: Vec<f64> = (0..count).map(|_| dist.sample(&mut rng)).collect();
        (inputs, targets)
    }

    fn smooth_series(n: usize) -> TimeSeries {
        TimeSeries::new(
            "smooth",
            (0..n)
                .map(|t| (t as f64 * 0.35).sin() + 0.3 * (t as f64 * 0.11).cos())
                .collect(),
        )
    }

    #[test]
    fn kernel_basics() {
        let k = RbfKernel::new(1.0).unwrap();
        assert_eq!(k.eval(&[0.3, -1.2], &[0.3, -1.2]).unwrap(), 1.0);
        let v = k.eval(&[0.0], &[2.0]).unwrap();
        assert!((v - (-2.0_f64).exp()).abs() < 1e-12);
        assert!((v - 0.1353352832366127).abs() < 1e-12);
        // Symmetry and range.
        let a = [0.4, 0.9];
        let b = [-0.7, 0.2];
        assert_eq!(k.eval(&a, &b).unwrap(), k.eval(&b, &a).unwrap());
        assert!(k.eval(&a, &b).unwrap() > 0.0 && k.eval(&a, &b).unwrap() <= 1.0);
        assert!(k.eval(&[1.0], &[1.0, 2.0]).is_err());
        assert!(RbfKernel::new(0.0).is_err());
    }

    #[test]
    fn wide_kernel_approaches_one() {
        let sigma = 1e6;
        let k = RbfKernel::new(sigma).unwrap();
        let v = k.eval(&[0.0], &[1.0]).unwrap();
        assert!(v > 1.0 - 1e-11, "{v}");
        // And extreme widths from the experiment tables stay finite.
        let huge = RbfKernel::new(1.5195e7).unwrap();
        let w = huge.eval(&[432.0; 35], &[622.0; 35]).unwrap();
        assert!(w.is_finite() && w > 0.0 && w <= 1.0);
    }

    #[test]
    fn embedding_matches_the_worked_example() {
        let series = TimeSeries::new("t", vec![1.0, 2.0, 3.0, 4.0]);
        let (inputs, targets) = embed(&series, &WindowConfig::new(2, 2)).unwrap();
        assert_eq!(inputs, vec![vec![1.0, 2.0], vec![2.0, 3.0]]);
        assert_eq!(targets, vec![3.0, 4.0]);
    }

    #[test]
    fn embedding_takes_the_last_windows() {
        let series = TimeSeries::new("t", (0..10).map(|t| t as f64).collect());
        let (inputs, targets) = embed(&series, &WindowConfig::new(2, 3)).unwrap();
        assert_eq!(inputs[0], vec![5.0, 6.0]);
        assert_eq!(targets, vec![7.0, 8.0, 9.0]);
        assert!(embed(&series, &WindowConfig::new(8, 3)).is_err());
    }

    #[test]
    fn spanning_config_uses_the_whole_training_set() {
        let config = WindowConfig::spanning(3, 100).unwrap();
        assert_eq!(config.size, 97);
        let series = smooth_series(100);
        let (inputs, _) = embed(&series, &config).unwrap();
        assert_eq!(inputs.len(), 97);
        assert!(WindowConfig::spanning(100, 100).is_err());
    }

    #[test]
    fn symmetric_two_point_fit_has_equal_duals() {
        let inputs = vec![vec![0.0], vec![1.5]];
        let targets = vec![2.0, 2.0];
        let kernel = RbfKernel::new(1.0).unwrap();
        let model = fit_lssvm(&inputs, &targets, 10.0, &kernel).unwrap();
        assert!((model.alpha[0] - model.alpha[1]).abs() < 1e-10);
        let p0 = model.predict(&[0.0]).unwrap();
        let p1 = model.predict(&[1.5]).unwrap();
        assert!((p0 - p1).abs() < 1e-10);
    }

    #[test]
    fn bordered_system_residual_is_small() {
        let (inputs, targets) = random_patterns(50, 3, 42);
        let kernel = RbfKernel::new(0.8).unwrap();
        let model = fit_lssvm(&inputs, &targets, 5.0, &kernel).unwrap();
        assert!(model.system_residual().unwrap() <= 1e-8);
    }

    #[test]
    fn huge_gamma_interpolates_distinct_points() {
        let inputs = vec![
            vec![0.0, 0.1],
            vec![0.5, -0.2],
            vec![-0.4, 0.3],
            vec![0.9, 0.9],
            vec![-0.8, -0.6],
        ];
        let targets = vec![1.0, -0.5, 0.25, 2.0, -1.25];
        let kernel = RbfKernel::new(0.7).unwrap();
        let model = fit_lssvm(&inputs, &targets, 1e8, &kernel).unwrap();
        for (x, y) in inputs.iter().zip(&targets) {
            let p = model.predict(x).unwrap();
            assert!((p - y).abs() < 1e-4, "{p} vs {y}");
        }
    }

    #[test]
    fn kkt_identity_holds_at_stored_points() {
        let (inputs, targets) = random_patterns(30, 2, 7);
        let kernel = RbfKernel::new(0.6).unwrap();
        let gamma = 3.5;
        let model = fit_lssvm(&inputs, &targets, gamma, &kernel).unwrap();
        for ((x, y), a) in inputs.iter().zip(&targets).zip(&model.alpha) {
            let gap = y - model.predict(x).unwrap();
            assert!((gap - a / gamma).abs() < 1e-8, "{gap} vs {}", a / gamma);
        }
    }

    #[test]
    fn zero_duals_predict_the_bias_and_far_points_decay_to_it() {
        let (inputs, targets) = random_patterns(5, 2, 3);
        let kernel = RbfKernel::new(0.5).unwrap();
        let mut model = fit_lssvm(&inputs, &targets, 2.0, &kernel).unwrap();
        let far = model.predict(&[1e6, -1e6]).unwrap();
        assert!((far - model.b).abs() < 1e-6);
        model.alpha = vec![0.0; 5];
        assert_eq!(model.predict(&[0.2, 0.2]).unwrap(), model.b);
        assert!(model.predict(&[0.2]).is_err());
    }

    #[test]
    fn incremental_add_matches_direct_inversion() {
        let (inputs, targets) = random_patterns(20, 3, 9);
        let kernel = RbfKernel::new(0.9).unwrap();
        let model = fit_lssvm(&inputs, &targets, 4.0, &kernel).unwrap();
        let x_new = vec![0.33, -0.8, 0.15];
        let grown = dlssvm_add(&model, &x_new, 0.4).unwrap();
        let mut all_inputs = inputs.clone();
        all_inputs.push(x_new);
        let mut all_targets = targets.clone();
        all_targets.push(0.4);
        let (q, _) = bordered_system(&all_inputs, &all_targets, 4.0, &kernel).unwrap();
        let direct = invert(&q).unwrap();
        let mut worst = 0.0_f64;
        for i in 0..22 {
            for j in 0..22 {
                worst = worst.max((grown.q_inverse[(i, j)] - direct[(i, j)]).abs());
            }
        }
        assert!(worst <= 1e-8, "max inverse discrepancy {worst}");
    }

    #[test]
    fn add_matches_batch_refit_predictions() {
        let (inputs, targets) = random_patterns(15, 2, 11);
        let kernel = RbfKernel::new(0.7).unwrap();
        let model = fit_lssvm(&inputs, &targets, 6.0, &kernel).unwrap();
        let x_new = vec![0.05, 0.55];
        let grown = dlssvm_add(&model, &x_new, -0.2).unwrap();
        let mut all_inputs = inputs.clone();
        all_inputs.push(x_new);
        let mut all_targets = targets;
        all_targets.push(-0.2);
        let batch = fit_lssvm(&all_inputs, &all_targets, 6.0, &kernel).unwrap();
        for probe in [[0.0, 0.0], [0.4, -0.3], [-0.9, 0.8]] {
            let a = grown.predict(&probe).unwrap();
            let b = batch.predict(&probe).unwrap();
            assert!((a - b).abs() <= 1e-7, "{a} vs {b}");
        }
        assert!(grown.system_residual().unwrap() <= 1e-8);
    }

    #[test]
    fn duplicate_points_stay_nonsingular() {
        let (inputs, targets) = random_patterns(10, 2, 13);
        let kernel = RbfKernel::new(0.5).unwrap();
        let model = fit_lssvm(&inputs, &targets, 2.0, &kernel).unwrap();
        let dup = inputs[3].clone();
        let grown = dlssvm_add(&model, &dup, targets[3]).unwrap();
        assert!(grown.alpha.iter().all(|a| a.is_finite()));
        assert!(grown.b.is_finite());
    }

    #[test]
    fn prune_drops_the_oldest_point() {
        let (inputs, targets) = random_patterns(8, 2, 17);
        let kernel = RbfKernel::new(0.8).unwrap();
        let model = fit_lssvm(&inputs, &targets, 3.0, &kernel).unwrap();
        let pruned = dlssvm_prune(&model).unwrap();
        assert_eq!(pruned.inputs, inputs[1..].to_vec());
        assert_eq!(pruned.targets, targets[1..].to_vec());
        let batch = fit_lssvm(&inputs[1..], &targets[1..], 3.0, &kernel).unwrap();
        for (a, b) in pruned.alpha.iter().zip(&batch.alpha) {
            assert!((a - b).abs() <= 1e-7);
        }
        assert!((pruned.b - batch.b).abs() <= 1e-7);
    }

    #[test]
    fn prune_needs_at_least_three_points() {
        let (inputs, targets) = random_patterns(2, 1, 19);
        let kernel = RbfKernel::new(1.0).unwrap();
        let model = fit_lssvm(&inputs, &targets, 1.0, &kernel).unwrap();
        assert!(dlssvm_prune(&model).is_err());
    }

    #[test]
    fn add_prune_cycle_matches_the_shifted_batch_fit() {
        let (inputs, targets) = random_patterns(20, 3, 23);
        let kernel = RbfKernel::new(0.9).unwrap();
        let model = fit_lssvm(&inputs, &targets, 5.0, &kernel).unwrap();
        let x_new = vec![0.1, 0.2, -0.3];
        let stepped = dlssvm_prune(&dlssvm_add(&model, &x_new, 0.7).unwrap()).unwrap();
        let mut shifted_inputs = inputs[1..].to_vec();
        shifted_inputs.push(x_new);
        let mut shifted_targets = targets[1..].to_vec();
        shifted_targets.push(0.7);
        let batch = fit_lssvm(&shifted_inputs, &shifted_targets, 5.0, &kernel).unwrap();
        for (a, b) in stepped.alpha.iter().zip(&batch.alpha) {
            assert!((a - b).abs() <= 1e-7);
        }
        assert!((stepped.b - batch.b).abs() <= 1e-7);
    }

    #[test]
    fn fifty_add_prune_cycles_stay_close_to_batch() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let dist = Uniform::new(-1.0, 1.0);
        let n_window = 30;
        let dim = 2;
        let all_inputs: Vec<Vec<f64>> = (0..n_window + 50)
            .map(|_| (0..dim).map(|_| dist.sample(&mut rng)).collect())
            .collect();
        let all_targets: Vec<f64> = all_inputs
            .iter()
            .map(|x| (2.0 * x[0]).sin() + 0.5 * x[1])
            .collect();
        let kernel = RbfKernel::new(0.8).unwrap();
        let gamma = 10.0;
        let mut model = fit_lssvm(
            &all_inputs[..n_window],
            &all_targets[..n_window],
            gamma,
            &kernel,
        )
        .unwrap();
        for step in 0..50 {
            let idx = n_window + step;
            model = dlssvm_add(&model, &all_inputs[idx], all_targets[idx]).unwrap();
            model = dlssvm_prune(&model).unwrap();
        }
        let batch = fit_lssvm(
            &all_inputs[50..50 + n_window],
            &all_targets[50..50 + n_window],
            gamma,
            &kernel,
        )
        .unwrap();
        let drift = model
            .alpha
            .iter()
            .zip(&batch.alpha)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0_f64, f64::max);
        assert!(drift <= 1e-6, "alpha drift {drift}");
    }

    #[test]
    fn predictions_ignore_storage_order() {
        let (inputs, targets) = random_patterns(12, 2, 31);
        let kernel = RbfKernel::new(0.6).unwrap();
        let model = fit_lssvm(&inputs, &targets, 4.0, &kernel).unwrap();
        let mut reordered: Vec<(Vec<f64>, f64)> =
            inputs.iter().cloned().zip(targets.iter().copied()).collect();
        reordered.reverse();
        let r_inputs: Vec<Vec<f64>> = reordered.iter().map(|p| p.0.clone()).collect();
        let r_targets: Vec<f64> = reordered.iter().map(|p| p.1).collect();
        let flipped = fit_lssvm(&r_inputs, &r_targets, 4.0, &kernel).unwrap();
        for probe in [[0.25, -0.4], [0.0, 0.9], [-0.7, -0.1]] {
            let a = model.predict(&probe).unwrap();
            let b = flipped.predict(&probe).unwrap();
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn gram_matrix_is_symmetric_with_unit_diagonal() {
        let (inputs, _) = random_patterns(10, 3, 37);
        let kernel = RbfKernel::new(0.75).unwrap();
        let omega = kernel_matrix(&inputs, &kernel).unwrap();
        for i in 0..10 {
            assert_eq!(omega[(i, i)], 1.0);
            for j in 0..10 {
                assert_eq!(omega[(i, j)], omega[(j, i)]);
            }
        }
    }

    #[test]
    fn rolling_horizon_one_is_a_single_prediction() {
        let series = smooth_series(40);
        let config = WindowConfig::spanning(4, 40).unwrap();
        let kernel = RbfKernel::new(0.9).unwrap();
        let (inputs, targets) = embed(&series, &config).unwrap();
        let model = fit_lssvm(&inputs, &targets, 20.0, &kernel).unwrap();
        let direct = model.predict(&series.values[36..]).unwrap();
        let recursive =
            rolling_forecast(&series, &config, 20.0, &kernel, 1, RollingMode::Recursive).unwrap();
        let actual = [0.123];
        let evaluated = rolling_forecast(
            &series,
            &config,
            20.0,
            &kernel,
            1,
            RollingMode::Evaluation(&actual),
        )
        .unwrap();
        assert!((recursive[0] - direct).abs() < 1e-12);
        assert!((evaluated[0] - direct).abs() < 1e-12);
    }

    #[test]
    fn evaluation_mode_matches_repeated_batch_refits() {
        let full = smooth_series(40);
        let train_len = 30;
        let train = TimeSeries::new("train", full.values[..train_len].to_vec());
        let actuals = &full.values[train_len..];
        let n = 3;
        let config = WindowConfig::spanning(n, train_len).unwrap();
        let kernel = RbfKernel::new(0.8).unwrap();
        let gamma = 15.0;
        let rolled = rolling_forecast(
            &train,
            &config,
            gamma,
            &kernel,
            10,
            RollingMode::Evaluation(actuals),
        )
        .unwrap();
        for (t, pred) in rolled.iter().enumerate() {
            let span = &full.values[..train_len + t];
            let span_series = TimeSeries::new("span", span.to_vec());
            let cfg = WindowConfig::new(n, config.size);
            let (inputs, targets) = embed(&span_series, &cfg).unwrap();
            let batch = fit_lssvm(&inputs, &targets, gamma, &kernel).unwrap();
            let window = &span[span.len() - n..];
            let direct = batch.predict(window).unwrap();
            assert!(
                (pred - direct).abs() <= 1e-6,
                "step {t}: {pred} vs {direct}"
            );
        }
    }

    #[test]
    fn recursive_mode_feeds_predictions_back() {
        let series = smooth_series(30);
        let config = WindowConfig::spanning(3, 30).unwrap();
        let kernel = RbfKernel::new(0.7).unwrap();
        let (inputs, targets) = embed(&series, &config).unwrap();
        let model = fit_lssvm(&inputs, &targets, 10.0, &kernel).unwrap();
        let rolled =
            rolling_forecast(&series, &config, 10.0, &kernel, 3, RollingMode::Recursive).unwrap();
        let mut history = series.values.clone();
        for (t, r) in rolled.iter().enumerate() {
            let window = history[history.len() - 3..].to_vec();
            let manual = model.predict(&window).unwrap();
            assert!((r - manual).abs() < 1e-12, "step {t}");
            history.push(manual);
        }
    }

    #[test]
    fn grid_search_singleton_returns_it() {
        let series = smooth_series(50);
        let result = grid_search(&series, &[0.8], &[10.0], &[3], 0).unwrap();
        assert_eq!(result.sigma, 0.8);
        assert_eq!(result.gamma, 10.0);
        assert_eq!(result.n, 3);
        assert_eq!(result.window_size, 47);
    }

    #[test]
    fn grid_search_returns_the_argmin() {
        let series = smooth_series(60);
        let sigmas = [0.2, 0.8, 3.0];
        let gammas = [1.0, 50.0];
        let ns = [2, 4];
        let best = grid_search(&series, &sigmas, &gammas, &ns, 0).unwrap();
        for &s in &sigmas {
            for &g in &gammas {
                for &n in &ns {
                    let mse = holdout_mse(&series, s, g, n).unwrap();
                    assert!(
                        best.validation_mse <= mse + 1e-15,
                        "beaten by σ={s}, γ={g}, n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn grid_search_recovers_a_planted_kernel_model() {
        // Generate data from a fitted RBF model and check the search picks
        // the generating width within one grid step.
        let seed_series = smooth_series(30);
        let config = WindowConfig::spanning(3, 30).unwrap();
        let kernel = RbfKernel::new(1.0).unwrap();
        let (inputs, targets) = embed(&seed_series, &config).unwrap();
        let generator = fit_lssvm(&inputs, &targets, 50.0, &kernel).unwrap();
        let mut values = seed_series.values.clone();
        for t in 0..50 {
            let window = values[values.len() - 3..].to_vec();
            let next = generator.predict(&window).unwrap() + 0.02 * ((t as f64) * 0.9).sin();
            values.push(next);
        }
        let series = TimeSeries::new("planted", values);
        let sigma_grid = [0.1, 0.4, 1.0, 2.5, 10.0];
        let best = grid_search(&series, &sigma_grid, &[50.0], &[3], 0).unwrap();
        let pos = sigma_grid.iter().position(|s| *s == best.sigma).unwrap();
        let true_pos = 2; // σ = 1.0
        assert!(
            pos.abs_diff(true_pos) <= 1,
            "recovered σ = {} too far from 1.0",
            best.sigma
        );
    }

    #[test]
    fn grid_search_reports_total_failure() {
        let series = TimeSeries::new("tiny", vec![1.0, 2.0, 3.0, 4.0, 5.0]);
        // n too large for the 80% split on every candidate.
        let err = grid_search(&series, &[1.0], &[1.0], &[4], 0).unwrap_err();
        assert!(err.to_string().contains("n=4"));
    }

    #[test]
    fn json_round_trip_rebuilds_the_inverse() {
        let (inputs, targets) = random_patterns(12, 2, 41);
        let kernel = RbfKernel::new(0.65).unwrap();
        let model = fit_lssvm(&inputs, &targets, 8.0, &kernel).unwrap();
        let json = model.to_json().unwrap();
        assert!(json.contains("\"sigma\""));
        assert!(json.contains("\"alpha\""));
        let back = LssvmModel::from_json(&json).unwrap();
        assert_eq!(back.alpha, model.alpha);
        assert_eq!(back.b, model.b);
        for i in 0..13 {
            for j in 0..13 {
                assert!((back.q_inverse[(i, j)] - model.q_inverse[(i, j)]).abs() < 1e-9);
            }
        }
        let probe = [0.1, -0.2];
        assert_eq!(
            model.predict(&probe).unwrap(),
            back.predict(&probe).unwrap()
        );
    }
}
