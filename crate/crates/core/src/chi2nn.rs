//! The chi-square test network.
//!
//! The output unit is a hard threshold, so the per-section count of predicted
//! positives `v_i` is piecewise constant in the parameters. Training descends
//!
//! ```text
//! E = ½ Σ_i (v_i / N − p_i)²
//! ```
//!
//! with the derivative of the threshold replaced by a constant `ξ`, and stops
//! as soon as the Pearson statistic `η = Σ (v_i − m_i)² / m_i` falls below a
//! chi-square critical value.
//!
//! A smoothed variant (sigmoid output, exact derivative) lives in [`smooth`];
//! it exists so the backpropagation formulas can be checked against finite
//! differences.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use crate::binning::{chi_square_stat, BinGrid, EmptySections, BinStats, BinningError};
use crate::network::{SingleHiddenLayer, DECISION_THRESHOLD, DIVERGENCE_LIMIT};
use crate::stats::{ChiSquareCritical, EpsilonMode, StatsError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Chi2Error {
    #[error("non-finite value while processing section {section}")]
    NonFinite { section: usize },
    #[error("training diverged at epoch {epoch}: |parameter| reached {max_abs:e}")]
    Diverged { epoch: usize, max_abs: f64 },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("input has {found} columns, network expects {expected}")]
    Dimension { expected: usize, found: usize },
    #[error(transparent)]
    Binning(#[from] BinningError),
    #[error(transparent)]
    Stats(#[from] StatsError),
}

/// Which factor multiplies the hidden-layer backpropagation terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradientMode {
    /// Chain rule through the hidden→output weight `w_j`.
    #[default]
    Corrected,
    /// The input weight `ω_kj` itself multiplies the term for `ω_kj`; for the
    /// hidden threshold `θ_j` the column sum `Σ_k ω_kj` is used.
    PaperLiteral,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    /// Sections per PCA dimension.
    pub k: usize,
    /// Constant standing in for the output activation's derivative.
    pub xi: f64,
    /// Learning rate, in (0, 1).
    pub rho: f64,
    pub hidden: usize,
    pub epsilon: EpsilonMode,
    pub max_epochs: usize,
    pub gradient_mode: GradientMode,
    pub empty_sections: EmptySections,
    pub seed: u64,
    pub init_scale: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            k: 2,
            xi: 0.5,
            rho: 0.1,
            hidden: 10,
            epsilon: EpsilonMode::default(),
            max_epochs: 5000,
            gradient_mode: GradientMode::Corrected,
            empty_sections: EmptySections::Strict,
            seed: 0,
            init_scale: 0.5,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), Chi2Error> {
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return Err(Chi2Error::Config(format!("rho must lie in (0, 1), got {}", self.rho)));
        }
        if !(self.xi > 0.0 && self.xi.is_finite()) {
            return Err(Chi2Error::Config(format!("xi must be positive, got {}", self.xi)));
        }
        if self.hidden < 1 {
            return Err(Chi2Error::Config("hidden must be >= 1".into()));
        }
        if self.k < 1 {
            return Err(Chi2Error::Config("k must be >= 1".into()));
        }
        if !(self.init_scale >= 0.0 && self.init_scale.is_finite()) {
            return Err(Chi2Error::Config("init_scale must be finite and >= 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chi2Network {
    pub params: SingleHiddenLayer,
}

/// Random initialization, uniform on `[-init_scale, init_scale]`.
pub fn init_network(inputs: usize, hidden: usize, seed: u64, init_scale: f64) -> Chi2Network {
    Chi2Network {
        params: SingleHiddenLayer::random(inputs, hidden, seed, init_scale),
    }
}

impl Chi2Network {
    pub fn hidden_forward(&self, x: ArrayView1<f64>) -> Array1<f64> {
        self.params.hidden_forward(x)
    }

    /// Hard threshold on the output pre-activation: 1 iff `s > 0.5`.
    pub fn output_forward(&self, hidden: ArrayView1<f64>) -> u8 {
        u8::from(self.params.output_preactivation(hidden) > DECISION_THRESHOLD)
    }

    pub fn predict(&self, x: ArrayView1<f64>) -> u8 {
        self.output_forward(self.hidden_forward(x).view())
    }

    pub fn predict_batch(&self, x: ArrayView2<f64>) -> Vec<u8> {
        let out = self.params.output_batch(&self.params.hidden_batch(x));
        out.iter().map(|&o| u8::from(o > DECISION_THRESHOLD)).collect()
    }
}

/// Training rows with their section indices.
#[derive(Debug, Clone, Copy)]
pub struct SectionedRows<'a> {
    pub inputs: ArrayView2<'a, f64>,
    pub sections: &'a [usize],
}

impl<'a> SectionedRows<'a> {
    pub fn new(inputs: ArrayView2<'a, f64>, sections: &'a [usize]) -> Self {
        assert_eq!(inputs.nrows(), sections.len());
        Self { inputs, sections }
    }
}

/// `v_i`: predicted positives per section.
pub fn accumulate_v(net: &Chi2Network, rows: SectionedRows<'_>, sections: usize) -> Vec<f64> {
    let out = net.params.output_batch(&net.params.hidden_batch(rows.inputs));
    let mut v = vec![0.0; sections];
    for (&o, &s) in out.iter().zip(rows.sections) {
        if o > DECISION_THRESHOLD {
            v[s] += 1.0;
        }
    }
    v
}

/// `E = ½ Σ (v_i/N − p_i)²` over all sections.
pub fn error_e(v: &[f64], stats: &BinStats) -> f64 {
    let n = stats.total as f64;
    0.5 * v
        .iter()
        .zip(&stats.p)
        .map(|(&v, &p)| (v / n - p).powi(2))
        .sum::<f64>()
}

/// Backpropagates per-row output sensitivities through the hidden layer.
///
/// `delta[l]` is `∂E/∂s_l`, the sensitivity of the error to the output
/// pre-activation of row `l`; `hidden` holds the matching hidden activations.
fn backprop(
    net: &SingleHiddenLayer,
    rows: SectionedRows<'_>,
    hidden: &Array2<f64>,
    delta: &Array1<f64>,
    mode: GradientMode,
) -> Result<SingleHiddenLayer, Chi2Error> {
    if let Some(l) = delta.iter().position(|d| !d.is_finite()) {
        return Err(Chi2Error::NonFinite { section: rows.sections[l] });
    }
    // δ_l · o_lj (1 − o_lj)
    let mut scaled = hidden.mapv(|o| o * (1.0 - o));
    scaled *= &delta.view().insert_axis(Axis(1));
    let (input_weights, hidden_thresholds) = match mode {
        GradientMode::Corrected => {
            scaled *= &net.output_weights;
            (rows.inputs.t().dot(&scaled), scaled.sum_axis(Axis(0)))
        }
        GradientMode::PaperLiteral => {
            let column_sums = net.input_weights.sum_axis(Axis(0));
            (
                rows.inputs.t().dot(&scaled) * &net.input_weights,
                scaled.sum_axis(Axis(0)) * &column_sums,
            )
        }
    };
    let grad = SingleHiddenLayer {
        input_weights,
        hidden_thresholds,
        output_weights: hidden.t().dot(delta),
        output_threshold: delta.sum(),
    };
    if !grad.all_finite() {
        let section = rows.sections.first().copied().unwrap_or(0);
        return Err(Chi2Error::NonFinite { section });
    }
    Ok(grad)
}

/// Surrogate gradient of `E` with the output derivative fixed at `xi`.
pub fn compute_gradients(
    net: &Chi2Network,
    rows: SectionedRows<'_>,
    v: &[f64],
    stats: &BinStats,
    xi: f64,
    mode: GradientMode,
) -> Result<SingleHiddenLayer, Chi2Error> {
    let n = stats.total as f64;
    let residual: Vec<f64> = v
        .iter()
        .zip(&stats.p)
        .map(|(&v, &p)| (v / n - p) / n)
        .collect();
    let hidden = net.params.hidden_batch(rows.inputs);
    let delta: Array1<f64> = rows.sections.iter().map(|&s| xi * residual[s]).collect();
    backprop(&net.params, rows, &hidden, &delta, mode)
}

/// One gradient step: every parameter moves by `−rho · gradient`.
pub fn apply_update(net: &mut Chi2Network, grad: &SingleHiddenLayer, rho: f64) {
    net.params.descend(grad, rho);
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    ChiSquarePass,
    MaxEpochs,
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub error: f64,
    /// `None` when no section has a positive expectation.
    pub eta: Option<f64>,
    pub effective_df: u32,
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainTrace {
    pub epochs: Vec<EpochRecord>,
    pub stop_reason: StopReason,
    /// Parameter updates applied (one per epoch that did not stop).
    pub updates: usize,
}

impl TrainTrace {
    pub fn last(&self) -> Option<&EpochRecord> {
        self.epochs.last()
    }
}

/// Full-batch training until `η < ε` or the epoch cap.
///
/// `inputs` must be the projected training rows used to build `grid` and
/// `stats`. Each epoch evaluates `v`, `E` and `η`; if `η < ε` training stops
/// before updating, otherwise one surrogate-gradient step is applied.
pub fn train(
    mut net: Chi2Network,
    inputs: ArrayView2<f64>,
    grid: &BinGrid,
    stats: &BinStats,
    config: &TrainConfig,
) -> Result<(Chi2Network, TrainTrace), Chi2Error> {
    config.validate()?;
    if inputs.ncols() != net.params.inputs() {
        return Err(Chi2Error::Dimension {
            expected: net.params.inputs(),
            found: inputs.ncols(),
        });
    }
    let sections = grid.assign(inputs)?;
    let rows = SectionedRows::new(inputs, &sections);
    let m = grid.sections();

    let critical = match chi_square_stat(&vec![0.0; m], &stats.expected, config.empty_sections) {
        Some(s) => Some(ChiSquareCritical::resolve(s.effective_df, config.epsilon)?),
        None => None,
    };

    let mut trace = TrainTrace {
        epochs: Vec::new(),
        stop_reason: if critical.is_some() {
            StopReason::MaxEpochs
        } else {
            StopReason::Degenerate
        },
        updates: 0,
    };

    for epoch in 0..config.max_epochs {
        let v = accumulate_v(&net, rows, m);
        let error = error_e(&v, stats);
        let chi = chi_square_stat(&v, &stats.expected, config.empty_sections);
        trace.epochs.push(EpochRecord {
            error,
            eta: chi.map(|c| c.eta),
            effective_df: chi.map(|c| c.effective_df).unwrap_or(0),
            epsilon: critical.map(|c| c.value),
        });
        if let (Some(chi), Some(crit)) = (chi, critical) {
            if chi.eta < crit.value {
                trace.stop_reason = StopReason::ChiSquarePass;
                break;
            }
        }
        let grad = compute_gradients(&net, rows, &v, stats, config.xi, config.gradient_mode)?;
        apply_update(&mut net, &grad, config.rho);
        trace.updates += 1;
        let max_abs = net.params.max_abs();
        if !(max_abs <= DIVERGENCE_LIMIT) {
            return Err(Chi2Error::Diverged { epoch, max_abs });
        }
    }
    Ok((net, trace))
}

/// Sigmoid-output relaxation of the network, used to verify the
/// backpropagation algebra against finite differences.
pub mod smooth {
    use super::*;
    use crate::network::sigmoid;

    /// Soft per-section counts `v_i = Σ sigmoid(s_l)`.
    pub fn soft_v(net: &SingleHiddenLayer, rows: SectionedRows<'_>, sections: usize) -> Vec<f64> {
        let out = net.output_batch(&net.hidden_batch(rows.inputs));
        let mut v = vec![0.0; sections];
        for (&o, &s) in out.iter().zip(rows.sections) {
            v[s] += sigmoid(o);
        }
        v
    }

    pub fn soft_error(net: &SingleHiddenLayer, rows: SectionedRows<'_>, stats: &BinStats) -> f64 {
        error_e(&soft_v(net, rows, stats.sections()), stats)
    }

    /// Exact gradient of [`soft_error`], i.e. the surrogate formulas with `ξ`
    /// replaced by `g'(s) = g(s)(1 − g(s))` row by row.
    pub fn soft_gradients(
        net: &SingleHiddenLayer,
        rows: SectionedRows<'_>,
        stats: &BinStats,
        mode: GradientMode,
    ) -> Result<SingleHiddenLayer, Chi2Error> {
        let n = stats.total as f64;
        let v = soft_v(net, rows, stats.sections());
        let residual: Vec<f64> = v
            .iter()
            .zip(&stats.p)
            .map(|(&v, &p)| (v / n - p) / n)
            .collect();
        let hidden = net.hidden_batch(rows.inputs);
        let out = net.output_batch(&hidden);
        let delta: Array1<f64> = out
            .iter()
            .zip(rows.sections)
            .map(|(&s, &sec)| {
                let o = sigmoid(s);
                residual[sec] * o * (1.0 - o)
            })
            .collect();
        backprop(net, rows, &hidden, &delta, mode)
    }
}
