//! Conventional backpropagation baseline: sigmoid hidden layer, linear
//! output, full-batch gradient descent on the mean squared error.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use crate::network::{SingleHiddenLayer, DECISION_THRESHOLD, DIVERGENCE_LIMIT};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BpnnError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{rows} rows but {labels} labels")]
    LabelMismatch { rows: usize, labels: usize },
    #[error("labels must be 0 or 1, found {0}")]
    Label(u8),
    #[error("training diverged at epoch {epoch}: |parameter| reached {max_abs:e}")]
    Diverged { epoch: usize, max_abs: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BpnnConfig {
    pub hidden: usize,
    pub rho: f64,
    pub mse_goal: f64,
    pub max_epochs: usize,
    pub seed: u64,
    pub init_scale: f64,
}

impl Default for BpnnConfig {
    fn default() -> Self {
        Self {
            hidden: 10,
            rho: 0.1,
            mse_goal: 1e-3,
            max_epochs: 5000,
            seed: 0,
            init_scale: 0.5,
        }
    }
}

impl BpnnConfig {
    pub fn validate(&self) -> Result<(), BpnnError> {
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return Err(BpnnError::Config(format!("rho must lie in (0, 1), got {}", self.rho)));
        }
        if !(self.mse_goal > 0.0) {
            return Err(BpnnError::Config(format!("mse_goal must be positive, got {}", self.mse_goal)));
        }
        if self.hidden < 1 {
            return Err(BpnnError::Config("hidden must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BpnnNetwork {
    pub params: SingleHiddenLayer,
}

impl BpnnNetwork {
    /// Linear ("purelin") output.
    pub fn output(&self, x: ArrayView1<f64>) -> f64 {
        let h = self.params.hidden_forward(x);
        self.params.output_preactivation(h.view())
    }

    pub fn predict(&self, x: ArrayView1<f64>) -> u8 {
        u8::from(self.output(x) > DECISION_THRESHOLD)
    }

    pub fn predict_batch(&self, x: ArrayView2<f64>) -> Vec<u8> {
        x.rows().into_iter().map(|row| self.predict(row)).collect()
    }
}

pub fn bpnn_predict(net: &BpnnNetwork, x: ArrayView1<f64>) -> u8 {
    net.predict(x)
}

fn residuals(net: &SingleHiddenLayer, h: &Array2<f64>, y: &[u8]) -> Array1<f64> {
    let mut out = net.output_batch(h);
    for (o, &t) in out.iter_mut().zip(y) {
        *o -= f64::from(t);
    }
    out
}

/// `(1/n) Σ (ŷ_l − y_l)²`.
pub fn mse(net: &SingleHiddenLayer, x: ArrayView2<f64>, y: &[u8]) -> f64 {
    let err = residuals(net, &net.hidden_batch(x), y);
    err.dot(&err) / y.len() as f64
}

/// MSE and its exact gradient.
pub fn mse_and_gradients(
    net: &SingleHiddenLayer,
    x: ArrayView2<f64>,
    y: &[u8],
) -> (f64, SingleHiddenLayer) {
    let n = y.len() as f64;
    let h = net.hidden_batch(x);
    let err = residuals(net, &h, y);
    let delta = &err * (2.0 / n);
    // ∂/∂s_j per row: δ_l · w_j · o_lj (1 − o_lj)
    let mut back = h.mapv(|o| o * (1.0 - o));
    back *= &delta.view().insert_axis(Axis(1));
    back *= &net.output_weights;
    let grad = SingleHiddenLayer {
        input_weights: x.t().dot(&back),
        hidden_thresholds: back.sum_axis(Axis(0)),
        output_weights: h.t().dot(&delta),
        output_threshold: delta.sum(),
    };
    (err.dot(&err) / n, grad)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BpnnStop {
    MseGoal,
    MaxEpochs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BpnnTrace {
    pub mse: Vec<f64>,
    pub stop_reason: BpnnStop,
}

pub fn bpnn_train(
    x: ArrayView2<f64>,
    y: &[u8],
    config: &BpnnConfig,
) -> Result<(BpnnNetwork, BpnnTrace), BpnnError> {
    config.validate()?;
    if x.nrows() != y.len() {
        return Err(BpnnError::LabelMismatch {
            rows: x.nrows(),
            labels: y.len(),
        });
    }
    if let Some(&bad) = y.iter().find(|&&t| t > 1) {
        return Err(BpnnError::Label(bad));
    }
    let mut net = SingleHiddenLayer::random(x.ncols(), config.hidden, config.seed, config.init_scale);
    let mut trace = BpnnTrace {
        mse: Vec::new(),
        stop_reason: BpnnStop::MaxEpochs,
    };
    for epoch in 0..config.max_epochs {
        let (loss, grad) = mse_and_gradients(&net, x, y);
        trace.mse.push(loss);
        if loss <= config.mse_goal {
            trace.stop_reason = BpnnStop::MseGoal;
            break;
        }
        net.descend(&grad, config.rho);
        let max_abs = net.max_abs();
        if !(max_abs <= DIVERGENCE_LIMIT) {
            return Err(BpnnError::Diverged { epoch, max_abs });
        }
    }
    Ok((BpnnNetwork { params: net }, trace))
}
