//! Repeated random-split comparison of both models on every dataset that is
//! present, printed as a markdown table; the JSON report goes to the path
//! given as the first argument, if any.
//!
//! ```sh
//! cargo run --release --example benchmark -- report.json
//! ```

use std::path::PathBuf;

use chi2nn::data::{load_dataset, DatasetId};
use chi2nn::experiment::{render_report, run_experiment, ExperimentConfig};
use chi2nn::model_io::ModelKind;

fn main() {
    let out = std::env::args().nth(1).map(PathBuf::from);
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let cfg = ExperimentConfig::default();

    let mut reports = Vec::new();
    for id in DatasetId::ALL {
        let Ok(ds) = load_dataset(id, &root) else {
            eprintln!("{}: skipped (no data)", id.label());
            continue;
        };
        for kind in [ModelKind::Chi2nn, ModelKind::Bpnn] {
            let r = run_experiment(&ds, kind, &cfg).unwrap();
            eprintln!("{:<9} {:<5} {:?}", id.label(), kind.label(), r.stop_reasons);
            reports.push(r);
        }
    }
    let (table, json) = render_report(&reports, false);
    print!("{table}");
    if let Some(path) = out {
        std::fs::write(path, json).unwrap();
    }
}
