//! Cumulative contribution rates under both PCA variants, next to the
//! reference values, and the resulting component counts at 90%.
//!
//! ```sh
//! cargo run --example pca_contributions
//! ```

use std::path::PathBuf;

use chi2nn::data::{load_dataset, DatasetId};
use chi2nn::experiment::{contribution_row, render_contribution_table};
use chi2nn::pca::{fit_pca, PcaVariant};

fn main() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let mut rows = Vec::new();
    for id in DatasetId::ALL {
        let Ok(ds) = load_dataset(id, &root) else {
            eprintln!("{}: data not found, skipped", id.label());
            continue;
        };
        for variant in [PcaVariant::Covariance, PcaVariant::Correlation] {
            rows.push(contribution_row(&ds, variant, 0.90).unwrap());
        }
    }
    print!("{}", render_contribution_table(&rows));

    // the model itself: axes, eigenvalues, projection
    let iris = load_dataset(DatasetId::Iris, &root).unwrap();
    let pca = fit_pca(iris.features.view(), PcaVariant::Correlation).unwrap();
    println!("\nIris correlation eigenvalues: {:.4}", pca.eigenvalues);
    let z = pca.project(iris.features.view(), 2).unwrap();
    println!("first projected row: {:.4}", z.row(0));
}
