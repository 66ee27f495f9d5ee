//! The MSE backpropagation baseline on BCW principal components.
//!
//! ```sh
//! cargo run --release --example bpnn_baseline
//! ```

use std::path::PathBuf;

use chi2nn::bpnn::{bpnn_train, BpnnConfig};
use chi2nn::data::{load_dataset, split_dataset, DatasetId};
use chi2nn::pca::{fit_pca, PcaVariant};
use ndarray::Axis;

fn main() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let ds = load_dataset(DatasetId::Bcw, root).unwrap();
    let pca = fit_pca(ds.features.view(), PcaVariant::Covariance).unwrap();
    let l = pca.select_count(0.90);
    let split = split_dataset(&ds, 0.9, 7).unwrap();
    let x = |idx: &[usize]| pca.project(ds.features.select(Axis(0), idx).view(), l).unwrap();
    let labels = |idx: &[usize]| idx.iter().map(|&i| ds.labels[i]).collect::<Vec<u8>>();

    let cfg = BpnnConfig { max_epochs: 2000, ..BpnnConfig::default() };
    let (net, trace) = bpnn_train(x(&split.train_indices).view(), &labels(&split.train_indices), &cfg).unwrap();
    for t in [0, 10, 100, 500, trace.mse.len() - 1] {
        println!("epoch {t:>4}  mse {:.5}", trace.mse[t]);
    }
    let y_test = labels(&split.test_indices);
    let pred = net.predict_batch(x(&split.test_indices).view());
    let hits = pred.iter().zip(&y_test).filter(|(a, b)| a == b).count();
    println!("{:?} after {} epochs; test accuracy {hits}/{}", trace.stop_reason, trace.mse.len(), y_test.len());
}
