//! Trains a small network, writes it in the plain-text model format and
//! reads it back.
//!
//! ```sh
//! cargo run --example save_load_model -- model.txt
//! ```

use std::path::PathBuf;

use chi2nn::binning::{BinGrid, BinStats};
use chi2nn::chi2nn::{init_network, train, Chi2Network, TrainConfig};
use chi2nn::data::{load_dataset, DatasetId};
use chi2nn::model_io::{read_params, ModelKind};
use chi2nn::pca::{fit_pca, PcaVariant};

fn main() {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("chi2nn-balloons.model"));
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let ds = load_dataset(DatasetId::Balloons, root).unwrap();
    let x = fit_pca(ds.features.view(), PcaVariant::Covariance)
        .unwrap()
        .project(ds.features.view(), 4)
        .unwrap();
    let grid = BinGrid::fit(x.view(), 2).unwrap();
    let stats = BinStats::from_assignments(&grid.assign(x.view()).unwrap(), &ds.labels, grid.sections()).unwrap();
    let cfg = TrainConfig::default();
    let (net, _) = train(init_network(4, cfg.hidden, 1, cfg.init_scale), x.view(), &grid, &stats, &cfg).unwrap();

    std::fs::write(&path, net.to_text()).unwrap();
    println!("wrote {}", path.display());

    let (kind, params) = read_params(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(kind, ModelKind::Chi2nn);
    let loaded = Chi2Network { params };
    assert_eq!(loaded, net);
    assert_eq!(loaded.predict_batch(x.view()), net.predict_batch(x.view()));
    println!("reloaded {} parameters, predictions identical", loaded.params.param_count());
}
