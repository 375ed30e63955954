//! Feed-forward neural forecasters trained by full-batch backpropagation:
//! a plain lag-window network, a time-lagged network with selected input
//! lags and a direct constant-to-output connection, and a seasonal network
//! mapping one full season to the next.
//!
//! Hidden units use the logistic sigmoid; the output layer is identity so
//! the networks can emit values outside (0, 1).

use crate::error::{ForecastError, Result};
use crate::numerics::Matrix;
use crate::series::TimeSeries;
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Architecture of a forecasting network.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NetworkTopology {
    /// `p` consecutive lagged values in, one value out.
    Fnn { p: usize, h: usize },
    /// Values at the given (strictly increasing) lags in, one value out,
    /// plus a constant input unit wired straight to the output.
    Tlnn { lags: Vec<usize>, h: usize },
    /// One season of `s` values in, the next season of `s` values out.
    Sann { s: usize, m: usize },
}

impl NetworkTopology {
    /// Number of (non-constant) input units.
    pub fn n_inputs(&self) -> usize {
        match self {
            NetworkTopology::Fnn { p, .. } => *p,
            NetworkTopology::Tlnn { lags, .. } => lags.len(),
            NetworkTopology::Sann { s, .. } => *s,
        }
    }

    /// Number of hidden units.
    pub fn n_hidden(&self) -> usize {
        match self {
            NetworkTopology::Fnn { h, .. } => *h,
            NetworkTopology::Tlnn { h, .. } => *h,
            NetworkTopology::Sann { m, .. } => *m,
        }
    }

    /// Number of output units.
    pub fn n_outputs(&self) -> usize {
        match self {
            NetworkTopology::Sann { s, .. } => *s,
            _ => 1,
        }
    }

    /// How far back into the history one input window reaches.
    pub fn reach(&self) -> usize {
        match self {
            NetworkTopology::Fnn { p, .. } => *p,
            NetworkTopology::Tlnn { lags, .. } => lags.last().copied().unwrap_or(0),
            NetworkTopology::Sann { s, .. } => *s,
        }
    }

    fn is_tlnn(&self) -> bool {
        matches!(self, NetworkTopology::Tlnn { .. })
    }

    /// Check the structural invariants.
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            NetworkTopology::Fnn { p, h } => *p >= 1 && *h >= 1,
            NetworkTopology::Tlnn { lags, h } => {
                *h >= 1
                    && !lags.is_empty()
                    && lags[0] >= 1
                    && lags.windows(2).all(|w| w[0] < w[1])
            }
            NetworkTopology::Sann { s, m } => *s >= 1 && *m >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(ForecastError::InvalidInput(format!(
                "invalid network topology {self:?}: counts must be ≥ 1 and lags strictly increasing"
            )))
        }
    }
}

impl std::fmt::Display for NetworkTopology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NetworkTopology::Fnn { p, h } => write!(f, "FNN({p}x{h}x1)"),
            NetworkTopology::Tlnn { lags, h } => {
                let lag_list: Vec<String> = lags.iter().map(|l| l.to_string()).collect();
                write!(f, "TLNN({}; {h})", lag_list.join(","))
            }
            NetworkTopology::Sann { s, m } => write!(f, "SANN({s}x{m}x{s})"),
        }
    }
}

/// Connection weights of a network.
///
/// `input_to_hidden` has shape `(n_inputs + 1) × h` with the bias terms in
/// row 0; `hidden_to_output` has shape `(h + 1) × n_outputs` with the output
/// bias in row 0. `direct_constant_to_output` is the weight of the constant
/// input unit's direct line to the output — used by the time-lagged
/// topology, where it replaces the output bias (row 0 is held at zero).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkWeights {
    pub input_to_hidden: Matrix,
    pub hidden_to_output: Matrix,
    pub direct_constant_to_output: f64,
}

/// Hyper-parameters for backpropagation training.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub seed: u64,
    /// Initial weights are drawn uniformly from ±this value.
    pub init_half_width: f64,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        TrainingConfig {
            learning_rate: 0.05,
            epochs: 5000,
            seed: 0,
            init_half_width: 0.5,
        }
    }
}

/// A trained network: topology, weights, and the training record.
#[derive(Debug, Clone)]
pub struct TrainedNetwork {
    pub topology: NetworkTopology,
    pub weights: NetworkWeights,
    pub config: TrainingConfig,
    /// Sum of squared errors over all patterns, recorded at the start of
    /// each epoch (before that epoch's update).
    pub loss_trace: Vec<f64>,
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Forward pass keeping the hidden activations for backpropagation.
fn forward_with_hidden(
    topology: &NetworkTopology,
    weights: &NetworkWeights,
    window: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    let n_in = topology.n_inputs();
    if window.len() != n_in {
        return Err(ForecastError::InvalidInput(format!(
            "input window has {} values but the topology expects {n_in}",
            window.len()
        )));
    }
    let h = topology.n_hidden();
    let n_out = topology.n_outputs();
    let i2h = &weights.input_to_hidden;
    let h2o = &weights.hidden_to_output;
    let mut hidden = Vec::with_capacity(h);
    for j in 0..h {
        let mut pre = i2h[(0, j)];
        for (i, x) in window.iter().enumerate() {
            pre += x * i2h[(i + 1, j)];
        }
        hidden.push(sigmoid(pre));
    }
    let mut outputs = Vec::with_capacity(n_out);
    for l in 0..n_out {
        let mut y = h2o[(0, l)] + weights.direct_constant_to_output;
        for (j, g) in hidden.iter().enumerate() {
            y += g * h2o[(j + 1, l)];
        }
        outputs.push(y);
    }
    Ok((hidden, outputs))
}

/// Evaluate the network on one input window.
pub fn forward(
    topology: &NetworkTopology,
    weights: &NetworkWeights,
    window: &[f64],
) -> Result<Vec<f64>> {
    Ok(forward_with_hidden(topology, weights, window)?.1)
}

/// Sliding-window training patterns for a topology over a series:
/// consecutive windows for the plain network, selected lags for the
/// time-lagged one, and season-to-next-season pairs for the seasonal one.
pub(crate) fn build_patterns(
    topology: &NetworkTopology,
    values: &[f64],
) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    topology.validate()?;
    let n = values.len();
    let mut inputs = Vec::new();
    let mut targets = Vec::new();
    match topology {
        NetworkTopology::Fnn { p, .. } => {
            for t in *p..n {
                inputs.push(values[t - p..t].to_vec());
                targets.push(vec![values[t]]);
            }
        }
        NetworkTopology::Tlnn { lags, .. } => {
            let reach = *lags.last().unwrap();
            for t in reach..n {
                inputs.push(lags.iter().map(|lag| values[t - lag]).collect());
                targets.push(vec![values[t]]);
            }
        }
        NetworkTopology::Sann { s, .. } => {
            // Seasons are aligned to the end of the sample so the last
            // complete season is always the final block.
            let blocks = n / s;
            let start = n - blocks * s;
            for i in 0..blocks.saturating_sub(1) {
                let a = start + i * s;
                inputs.push(values[a..a + s].to_vec());
                targets.push(values[a + s..a + 2 * s].to_vec());
            }
        }
    }
    if inputs.is_empty() {
        return Err(ForecastError::InvalidInput(format!(
            "series of length {n} is too short to form any training pattern for {topology:?}"
        )));
    }
    Ok((inputs, targets))
}

/// Weight gradients of the summed squared error over a batch.
struct Gradients {
    input_to_hidden: Matrix,
    hidden_to_output: Matrix,
    direct: f64,
}

/// Batch loss `Σ_patterns Σ_outputs e²` and its gradient with respect to
/// every weight (fixed weights of the topology get a zero slot).
fn batch_gradient(
    topology: &NetworkTopology,
    weights: &NetworkWeights,
    inputs: &[Vec<f64>],
    targets: &[Vec<f64>],
) -> Result<(f64, Gradients)> {
    let h = topology.n_hidden();
    let n_out = topology.n_outputs();
    let n_in = topology.n_inputs();
    let tlnn = topology.is_tlnn();
    let mut g_i2h = Matrix::zeros(n_in + 1, h);
    let mut g_h2o = Matrix::zeros(h + 1, n_out);
    let mut g_direct = 0.0;
    let mut loss = 0.0;
    for (window, target) in inputs.iter().zip(targets) {
        let (hidden, outputs) = forward_with_hidden(topology, weights, window)?;
        // dF/dŷ_l = −2·e_l with e_l = y_l − ŷ_l.
        let mut dout = Vec::with_capacity(n_out);
        for (l, out) in outputs.iter().enumerate() {
            let e = target[l] - out;
            loss += e * e;
            dout.push(-2.0 * e);
        }
        for (l, d) in dout.iter().enumerate() {
            if !tlnn {
                g_h2o[(0, l)] += d;
            }
            for (j, g) in hidden.iter().enumerate() {
                g_h2o[(j + 1, l)] += d * g;
            }
        }
        if tlnn {
            g_direct += dout.iter().sum::<f64>();
        }
        for (j, g) in hidden.iter().enumerate() {
            let back: f64 = dout
                .iter()
                .enumerate()
                .map(|(l, d)| d * weights.hidden_to_output[(j + 1, l)])
                .sum();
            let delta = g * (1.0 - g) * back;
            g_i2h[(0, j)] += delta;
            for (i, x) in window.iter().enumerate() {
                g_i2h[(i + 1, j)] += delta * x;
            }
        }
    }
    Ok((
        loss,
        Gradients {
            input_to_hidden: g_i2h,
            hidden_to_output: g_h2o,
            direct: g_direct,
        },
    ))
}

/// Draw initial weights uniformly from ±`init_half_width`, deterministically
/// in the seed. Weights that the topology holds fixed (the output-bias row
/// of the time-lagged network, the direct connection elsewhere) stay zero
/// and consume no draws.
fn initialize(topology: &NetworkTopology, config: &TrainingConfig) -> Result<NetworkWeights> {
    if config.init_half_width <= 0.0 || !config.init_half_width.is_finite() {
        return Err(ForecastError::InvalidInput(
            "init_half_width must be positive and finite".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let dist = Uniform::new_inclusive(-config.init_half_width, config.init_half_width);
    let n_in = topology.n_inputs();
    let h = topology.n_hidden();
    let n_out = topology.n_outputs();
    let tlnn = topology.is_tlnn();
    let mut i2h = Matrix::zeros(n_in + 1, h);
    for r in 0..n_in + 1 {
        for c in 0..h {
            i2h[(r, c)] = dist.sample(&mut rng);
        }
    }
    let mut h2o = Matrix::zeros(h + 1, n_out);
    for r in 0..h + 1 {
        for c in 0..n_out {
            if tlnn && r == 0 {
                continue;
            }
            h2o[(r, c)] = dist.sample(&mut rng);
        }
    }
    let direct = if tlnn { dist.sample(&mut rng) } else { 0.0 };
    Ok(NetworkWeights {
        input_to_hidden: i2h,
        hidden_to_output: h2o,
        direct_constant_to_output: direct,
    })
}

/// Train a network on a series by full-batch gradient descent on the summed
/// squared error. The step is the batch gradient divided by the number of
/// (pattern, output) pairs, scaled by the learning rate, which keeps the
/// default rate usable across sample sizes. Deterministic in the seed.
pub fn train(
    topology: &NetworkTopology,
    series: &TimeSeries,
    config: &TrainingConfig,
) -> Result<TrainedNetwork> {
    topology.validate()?;
    if config.learning_rate <= 0.0 || !config.learning_rate.is_finite() {
        return Err(ForecastError::InvalidInput(
            "learning_rate must be positive and finite".into(),
        ));
    }
    let (inputs, targets) = build_patterns(topology, &series.values)?;
    let mut weights = initialize(topology, config)?;
    let scale = config.learning_rate / (inputs.len() * topology.n_outputs()) as f64;
    let tlnn = topology.is_tlnn();
    let mut loss_trace = Vec::with_capacity(config.epochs);
    for epoch in 0..config.epochs {
        let (loss, grads) = batch_gradient(topology, &weights, &inputs, &targets)?;
        if !loss.is_finite() {
            return Err(ForecastError::Divergence { epoch, loss });
        }
        loss_trace.push(loss);
        for r in 0..weights.input_to_hidden.rows() {
            for c in 0..weights.input_to_hidden.cols() {
                weights.input_to_hidden[(r, c)] -= scale * grads.input_to_hidden[(r, c)];
            }
        }
        for r in 0..weights.hidden_to_output.rows() {
            if tlnn && r == 0 {
                continue;
            }
            for c in 0..weights.hidden_to_output.cols() {
                weights.hidden_to_output[(r, c)] -= scale * grads.hidden_to_output[(r, c)];
            }
        }
        if tlnn {
            weights.direct_constant_to_output -= scale * grads.direct;
        }
    }
    let (final_loss, _) = batch_gradient(topology, &weights, &inputs, &targets)?;
    if !final_loss.is_finite() {
        return Err(ForecastError::Divergence {
            epoch: config.epochs,
            loss: final_loss,
        });
    }
    Ok(TrainedNetwork {
        topology: topology.clone(),
        weights,
        config: config.clone(),
        loss_trace,
    })
}

/// Compare the backpropagation gradient against central finite differences
/// (step 1e-6) on every trainable weight of the batch loss; returns the
/// largest relative discrepancy `|g_a − g_n| / (|g_a| + |g_n| + 1e-12)`.
pub fn gradient_check(
    topology: &NetworkTopology,
    weights: &NetworkWeights,
    inputs: &[Vec<f64>],
    targets: &[Vec<f64>],
) -> Result<f64> {
    const STEP: f64 = 1e-6;
    let (_, analytic) = batch_gradient(topology, weights, inputs, targets)?;
    let tlnn = topology.is_tlnn();
    let mut worst = 0.0_f64;
    let mut probe = weights.clone();
    let loss_at = |w: &NetworkWeights| -> Result<f64> {
        let mut total = 0.0;
        for (window, target) in inputs.iter().zip(targets) {
            let out = forward(topology, w, window)?;
            for (l, o) in out.iter().enumerate() {
                let e = target[l] - o;
                total += e * e;
            }
        }
        Ok(total)
    };
    let mut record = |analytic_g: f64, numeric_g: f64| {
        let rel = (analytic_g - numeric_g).abs() / (analytic_g.abs() + numeric_g.abs() + 1e-12);
        worst = worst.max(rel);
    };
    for r in 0..probe.input_to_hidden.rows() {
        for c in 0..probe.input_to_hidden.cols() {
            let orig = probe.input_to_hidden[(r, c)];
            probe.input_to_hidden[(r, c)] = orig + STEP;
            let up = loss_at(&probe)?;
            probe.input_to_hidden[(r, c)] = orig - STEP;
            let down = loss_at(&probe)?;
            probe.input_to_hidden[(r, c)] = orig;
            record(analytic.input_to_hidden[(r, c)], (up - down) / (2.0 * STEP));
        }
    }
    for r in 0..probe.hidden_to_output.rows() {
        if tlnn && r == 0 {
            continue;
        }
        for c in 0..probe.hidden_to_output.cols() {
            let orig = probe.hidden_to_output[(r, c)];
            probe.hidden_to_output[(r, c)] = orig + STEP;
            let up = loss_at(&probe)?;
            probe.hidden_to_output[(r, c)] = orig - STEP;
            let down = loss_at(&probe)?;
            probe.hidden_to_output[(r, c)] = orig;
            record(analytic.hidden_to_output[(r, c)], (up - down) / (2.0 * STEP));
        }
    }
    if tlnn {
        let orig = probe.direct_constant_to_output;
        probe.direct_constant_to_output = orig + STEP;
        let up = loss_at(&probe)?;
        probe.direct_constant_to_output = orig - STEP;
        let down = loss_at(&probe)?;
        probe.direct_constant_to_output = orig;
        record(analytic.direct, (up - down) / (2.0 * STEP));
    }
    Ok(worst)
}

/// The input window for predicting the value right after `history`.
pub(crate) fn lag_window(topology: &NetworkTopology, history: &[f64]) -> Result<Vec<f64>> {
    let n = history.len();
    let reach = topology.reach();
    if n < reach {
        return Err(ForecastError::InvalidInput(format!(
            "history of length {n} is shorter than the topology's reach {reach}"
        )));
    }
    Ok(match topology {
        NetworkTopology::Fnn { p, .. } => history[n - p..].to_vec(),
        NetworkTopology::Tlnn { lags, .. } => lags.iter().map(|lag| history[n - lag]).collect(),
        NetworkTopology::Sann { s, .. } => history[n - s..].to_vec(),
    })
}

/// Forecast `horizon` values beyond the end of `train`. The lag-window
/// topologies feed each prediction back as an input for the next step; the
/// seasonal topology emits whole seasons and chains them when the horizon
/// spans more than one.
pub fn forecast(
    topology: &NetworkTopology,
    weights: &NetworkWeights,
    train: &TimeSeries,
    horizon: usize,
) -> Result<Vec<f64>> {
    if horizon == 0 {
        return Err(ForecastError::InvalidInput(
            "forecast horizon must be at least 1".into(),
        ));
    }
    match topology {
        NetworkTopology::Sann { .. } => {
            let mut block = lag_window(topology, &train.values)?;
            let mut out = Vec::with_capacity(horizon);
            while out.len() < horizon {
                block = forward(topology, weights, &block)?;
                out.extend_from_slice(&block);
            }
            out.truncate(horizon);
            Ok(out)
        }
        _ => {
            let mut history = train.values.clone();
            let mut out = Vec::with_capacity(horizon);
            for _ in 0..horizon {
                let window = lag_window(topology, &history)?;
                let y = forward(topology, weights, &window)?[0];
                history.push(y);
                out.push(y);
            }
            Ok(out)
        }
    }
}

/// Flat JSON form of a trained network.
#[derive(Serialize, Deserialize)]
struct NetworkJson {
    kind: String,
    /// `[inputs, hidden, outputs]`.
    dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    lags: Vec<usize>,
    input_to_hidden: Matrix,
    hidden_to_output: Matrix,
    direct_constant_to_output: f64,
    seed: u64,
    config: TrainingConfig,
}

impl TrainedNetwork {
    /// Serialize to the canonical JSON form (the loss trace is a training
    /// artifact and is not persisted).
    pub fn to_json(&self) -> Result<String> {
        let kind = match &self.topology {
            NetworkTopology::Fnn { .. } => "fnn",
            NetworkTopology::Tlnn { .. } => "tlnn",
            NetworkTopology::Sann { .. } => "sann",
        };
        let lags = match &self.topology {
            NetworkTopology::Tlnn { lags, .. } => lags.clone(),
            _ => Vec::new(),
        };
        let doc = NetworkJson {
            kind: kind.into(),
            dims: vec![
                self.topology.n_inputs(),
                self.topology.n_hidden(),
                self.topology.n_outputs(),
            ],
            lags,
            input_to_hidden: self.weights.input_to_hidden.clone(),
            hidden_to_output: self.weights.hidden_to_output.clone(),
            direct_constant_to_output: self.weights.direct_constant_to_output,
            seed: self.config.seed,
            config: self.config.clone(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    /// Reload from the canonical JSON form.
    pub fn from_json(json: &str) -> Result<TrainedNetwork> {
        let doc: NetworkJson = serde_json::from_str(json)?;
        if doc.dims.len() != 3 {
            return Err(ForecastError::InvalidInput(
                "network dims must be [inputs, hidden, outputs]".into(),
            ));
        }
        let topology = match doc.kind.as_str() {
            "fnn" => NetworkTopology::Fnn {
                p: doc.dims[0],
                h: doc.dims[1],
            },
            "tlnn" => NetworkTopology::Tlnn {
                lags: doc.lags.clone(),
                h: doc.dims[1],
            },
            "sann" => NetworkTopology::Sann {
                s: doc.dims[0],
                m: doc.dims[1],
            },
            other => {
                return Err(ForecastError::InvalidInput(format!(
                    "unknown network kind '{other}'"
                )))
            }
        };
        topology.validate()?;
        if doc.input_to_hidden.rows() != topology.n_inputs() + 1
            || doc.input_to_hidden.cols() != topology.n_hidden()
            || doc.hidden_to_output.rows() != topology.n_hidden() + 1
            || doc.hidden_to_output.cols() != topology.n_outputs()
        {
            return Err(ForecastError::InvalidInput(
                "weight matrix dimensions do not match the declared topology".into(),
            ));
        }
        Ok(TrainedNetwork {
            topology,
            weights: NetworkWeights {
                input_to_hidden: doc.input_to_hidden,
                hidden_to_output: doc.hidden_to_output,
                direct_constant_to_output: doc.direct_constant_to_output,
            },
            config: doc.config,
            loss_trace: Vec::new(),
        })
    }
}
