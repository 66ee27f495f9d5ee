//! Parameter storage shared by the chi-square network and the MSE baseline:
//! one sigmoid hidden layer feeding a single output unit.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Output pre-activations above this value are classified positive.
pub const DECISION_THRESHOLD: f64 = 0.5;

/// Weights and thresholds of an `r → h → 1` network.
///
/// The same shape doubles as a gradient set in the training code.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingleHiddenLayer {
    /// `r × h`, entry `(k, j)` connects input `k` to hidden unit `j`.
    pub input_weights: Array2<f64>,
    pub hidden_thresholds: Array1<f64>,
    pub output_weights: Array1<f64>,
    pub output_threshold: f64,
}

impl SingleHiddenLayer {
    pub fn zeros(inputs: usize, hidden: usize) -> Self {
        Self {
            input_weights: Array2::zeros((inputs, hidden)),
            hidden_thresholds: Array1::zeros(hidden),
            output_weights: Array1::zeros(hidden),
            output_threshold: 0.0,
        }
    }

    /// Every parameter i.i.d. uniform on `[-scale, scale]`, drawn in the order
    /// input weights (row-major), hidden thresholds, output weights, output
    /// threshold.
    pub fn random(inputs: usize, hidden: usize, seed: u64, scale: f64) -> Self {
        let mut net = Self::zeros(inputs, hidden);
        if scale == 0.0 {
            return net;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for v in net.params_mut() {
            *v = rng.random_range(-scale..=scale);
        }
        net
    }

    pub fn inputs(&self) -> usize {
        self.input_weights.nrows()
    }

    pub fn hidden(&self) -> usize {
        self.input_weights.ncols()
    }

    pub fn param_count(&self) -> usize {
        self.inputs() * self.hidden() + 2 * self.hidden() + 1
    }

    /// Sigmoid activations of the hidden layer.
    pub fn hidden_forward(&self, x: ArrayView1<f64>) -> Array1<f64> {
        let pre = x.dot(&self.input_weights) + &self.hidden_thresholds;
        pre.mapv(sigmoid)
    }

    /// Hidden activations for every row of `x`, one row per input row.
    pub fn hidden_batch(&self, x: ArrayView2<f64>) -> Array2<f64> {
        let mut h = x.dot(&self.input_weights);
        h += &self.hidden_thresholds;
        h.mapv_inplace(sigmoid);
        h
    }

    /// Output pre-activations for a batch of hidden rows.
    pub fn output_batch(&self, hidden: &Array2<f64>) -> Array1<f64> {
        hidden.dot(&self.output_weights) + self.output_threshold
    }

    /// `Σ_j w_j · hidden_j + θ`.
    pub fn output_preactivation(&self, hidden: ArrayView1<f64>) -> f64 {
        self.output_weights.dot(&hidden) + self.output_threshold
    }

    /// Parameters in serialization order.
    pub fn params(&self) -> impl Iterator<Item = &f64> {
        self.input_weights
            .iter()
            .chain(self.hidden_thresholds.iter())
            .chain(self.output_weights.iter())
            .chain(std::iter::once(&self.output_threshold))
    }

    pub fn params_mut(&mut self) -> impl Iterator<Item = &mut f64> {
        self.input_weights
            .iter_mut()
            .chain(self.hidden_thresholds.iter_mut())
            .chain(self.output_weights.iter_mut())
            .chain(std::iter::once(&mut self.output_threshold))
    }

    pub fn all_finite(&self) -> bool {
        self.params().all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.params().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `self ← self − rate · grad`.
    pub fn descend(&mut self, grad: &SingleHiddenLayer, rate: f64) {
        assert_eq!(self.input_weights.dim(), grad.input_weights.dim());
        self.input_weights.scaled_add(-rate, &grad.input_weights);
        self.hidden_thresholds.scaled_add(-rate, &grad.hidden_thresholds);
        self.output_weights.scaled_add(-rate, &grad.output_weights);
        self.output_threshold -= rate * grad.output_threshold;
    }
}

/// Parameters larger than this in magnitude abort training.
pub const DIVERGENCE_LIMIT: f64 = 1e6;
