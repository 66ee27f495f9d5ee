//! Chi-square test neural network (χ²NN) binary classifier.
//!
//! A single-hidden-layer network whose output is a hard 0/1 threshold. The
//! projected input space is cut into `K^L` equal-width sections, and training
//! pushes the number of predicted positives in each section towards the
//! number of actual positives there. Training stops once the Pearson
//! chi-square statistic between the two count vectors drops below a critical
//! value.
//!
//! Modules, bottom-up:
//!
//! - [`stats`]: regularized incomplete gamma, chi-square CDF and quantile.
//! - [`data`]: UCI dataset adapters and seeded train/test splits.
//! - [`pca`]: Jacobi-based PCA with component selection.
//! - [`binning`]: the section grid and per-section tallies.
//! - [`network`]: shared `r → h → 1` parameter storage.
//! - [`chi2nn`]: the chi-square network and its training loop.
//! - [`bpnn`]: MSE backpropagation baseline.
//! - [`model_io`]: plain-text model files.
//! - [`experiment`]: repeated-split benchmark harness and reports.
//! - [`cli`]: the `chi2nn` command line.
//!
//! ```no_run
//! use chi2nn::data::{load_dataset, DatasetId};
//! use chi2nn::experiment::{run_experiment, ExperimentConfig};
//! use chi2nn::model_io::ModelKind;
//!
//! let iris = load_dataset(DatasetId::Iris, "data").unwrap();
//! let report = run_experiment(&iris, ModelKind::Chi2nn, &ExperimentConfig::default()).unwrap();
//! println!("mean accuracy {:.2}%", report.mean_accuracy * 100.0);
//! ```

pub mod binning;
pub mod bpnn;
pub mod chi2nn;
pub mod cli;
pub mod data;
pub mod experiment;
pub mod model_io;
pub mod network;
pub mod pca;
pub mod stats;

pub use binning::{chi_square_stat, compute_stats, fit_grid, BinGrid, BinStats, EmptySections};
pub use bpnn::{bpnn_train, BpnnConfig, BpnnNetwork};
pub use chi2nn::{init_network, train, Chi2Network, GradientMode, StopReason, TrainConfig, TrainTrace};
pub use data::{load_dataset, split_dataset, Dataset, DatasetId, Split};
pub use experiment::{run_experiment, ExperimentConfig, ExperimentReport};
pub use pca::{fit_pca, PcaModel, PcaScope, PcaVariant};
pub use stats::{chi2_quantile, regularized_gamma_lower, EpsilonMode};
