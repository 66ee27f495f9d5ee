//! Loads every dataset found under `data/` and prints its encoded shape.
//! With `--dump <dir>` the encoded tables are written as CSV.
//!
//! ```sh
//! cargo run --example load_datasets -- [data-dir] [--dump out/]
//! ```

use std::path::PathBuf;

use chi2nn::data::{load_dataset, DatasetId};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let dump = args
        .iter()
        .position(|a| a == "--dump")
        .and_then(|i| args.get(i + 1))
        .map(PathBuf::from);
    let root = args
        .first()
        .filter(|a| !a.starts_with("--"))
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data"));

    for id in DatasetId::ALL {
        match load_dataset(id, &root) {
            Ok(ds) => {
                let (neg, pos) = ds.class_counts();
                println!(
                    "{:<9} {:>4} rows x {:>2} features  neg {neg:>3} pos {pos:>3}  dropped {}",
                    id.label(),
                    ds.len(),
                    ds.dim(),
                    ds.dropped_rows
                );
                if let Some(dir) = &dump {
                    std::fs::create_dir_all(dir).unwrap();
                    let f = std::fs::File::create(dir.join(format!("{}.csv", id.as_str()))).unwrap();
                    ds.write_csv(f).unwrap();
                }
            }
            Err(e) => println!("{:<9} not loaded: {e}", id.label()),
        }
    }
}
