//! Splits a 2-D projection of BCW into K² equal-width (K = 3 unless given) sections and prints
//! the per-section tallies the network is trained to match.
//!
//! ```sh
//! cargo run --example binning -- 3
//! ```

use std::path::PathBuf;

use chi2nn::binning::{chi_square_stat, BinGrid, BinStats, EmptySections};
use chi2nn::data::{load_dataset, DatasetId};
use chi2nn::pca::{fit_pca, PcaVariant};

fn main() {
    let k: usize = std::env::args().nth(1).map(|a| a.parse().unwrap()).unwrap_or(3);
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let ds = load_dataset(DatasetId::Bcw, root).unwrap();
    let x = fit_pca(ds.features.view(), PcaVariant::Covariance)
        .unwrap()
        .project(ds.features.view(), 2)
        .unwrap();

    let grid = BinGrid::fit(x.view(), k).unwrap();
    let sections = grid.assign(x.view()).unwrap();
    let stats = BinStats::from_assignments(&sections, &ds.labels, grid.sections()).unwrap();

    println!("{} sections, widths {:.3} / {:.3}", grid.sections(), grid.width(0), grid.width(1));
    println!("{:>7} {:>5} {:>5} {:>8}", "section", "N_i", "c_i", "p_i");
    for i in 0..stats.sections() {
        println!("{i:>7} {:>5} {:>5} {:>8.4}", stats.counts[i], stats.positives[i], stats.p[i]);
    }

    // a classifier that calls everything positive
    let v: Vec<f64> = stats.counts.iter().map(|&n| n as f64).collect();
    for rule in [EmptySections::Strict, EmptySections::Skip] {
        let s = chi_square_stat(&v, &stats.expected, rule).unwrap();
        println!("all-positive η ({rule:?}) = {:.2}, df {}", s.eta, s.effective_df);
    }
}
