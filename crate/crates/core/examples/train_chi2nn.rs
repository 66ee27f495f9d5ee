//! Trains one network on a 90/10 split of Iris and prints the error and
//! statistic per epoch until the chi-square stop fires.
//!
//! ```sh
//! cargo run --example train_chi2nn -- [seed]
//! ```

use std::path::PathBuf;

use chi2nn::binning::{BinGrid, BinStats};
use chi2nn::chi2nn::{init_network, train, TrainConfig};
use chi2nn::data::{load_dataset, split_dataset, DatasetId};
use chi2nn::pca::{fit_pca, PcaVariant};
use ndarray::Axis;

fn main() {
    let seed: u64 = std::env::args().nth(1).map(|a| a.parse().unwrap()).unwrap_or(42);
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let ds = load_dataset(DatasetId::Iris, root).unwrap();

    let pca = fit_pca(ds.features.view(), PcaVariant::Covariance).unwrap();
    let l = pca.select_count(0.90);
    let split = split_dataset(&ds, 0.9, seed).unwrap();
    let pick = |idx: &[usize]| pca.project(ds.features.select(Axis(0), idx).view(), l).unwrap();
    let (x_train, x_test) = (pick(&split.train_indices), pick(&split.test_indices));
    let y_train: Vec<u8> = split.train_indices.iter().map(|&i| ds.labels[i]).collect();
    let y_test: Vec<u8> = split.test_indices.iter().map(|&i| ds.labels[i]).collect();

    let grid = BinGrid::fit(x_train.view(), 2).unwrap();
    let stats = BinStats::from_assignments(&grid.assign(x_train.view()).unwrap(), &y_train, grid.sections()).unwrap();
    let config = TrainConfig { seed, ..TrainConfig::default() };
    let net = init_network(l, config.hidden, seed, config.init_scale);
    let (net, trace) = train(net, x_train.view(), &grid, &stats, &config).unwrap();

    println!("{l} component(s), {} sections", grid.sections());
    println!("{:>5} {:>12} {:>10} {:>8}", "epoch", "E", "η", "ε");
    for (t, e) in trace.epochs.iter().enumerate() {
        let eta = e.eta.map_or("-".into(), |v| format!("{v:.3}"));
        let eps = e.epsilon.map_or("-".into(), |v| format!("{v:.3}"));
        println!("{t:>5} {:>12.6} {eta:>10} {eps:>8}", e.error);
    }
    let pred = net.predict_batch(x_test.view());
    let hits = pred.iter().zip(&y_test).filter(|(a, b)| a == b).count();
    println!("stop: {:?}; test accuracy {hits}/{}", trace.stop_reason, y_test.len());
}
