mod common;

use std::fmt::Write as _;
use std::fs;

use chi2nn::data::{load_dataset, split_dataset, DataError, DatasetId};
use common::data_root;
use sha2::{Digest, Sha256};

fn hex(bytes: &[u8]) -> String {
    bytes.iter().fold(String::new(), |mut s, b| {
        write!(s, "{b:02x}").unwrap();
        s
    })
}

fn available(id: DatasetId) -> bool {
    let dir = data_root().join(id.as_str());
    id.source_files().iter().all(|f| dir.join(f).is_file())
}

#[test]
fn bundled_files_match_checksums() {
    let root = data_root();
    let sums = fs::read_to_string(root.join("SHA256SUMS")).unwrap();
    let mut checked = 0;
    for line in sums.lines().filter(|l| !l.trim().is_empty()) {
        let (digest, name) = line.split_once("  ").unwrap();
        let bytes = fs::read(root.join(name)).unwrap();
        assert_eq!(hex(&Sha256::digest(&bytes)), digest, "{name}");
        checked += 1;
    }
    assert!(checked >= 6);
}

#[test]
fn available_datasets_have_reference_shapes() {
    for id in DatasetId::ALL {
        if !available(id) {
            eprintln!("skipping {}: files not present under data/", id.as_str());
            continue;
        }
        let ds = load_dataset(id, data_root()).unwrap();
        let shape = id.expected_shape();
        assert_eq!(ds.class_counts(), (shape.negatives, shape.positives), "{}", id.as_str());
        assert!(ds.features.iter().all(|v| v.is_finite()));
        assert_eq!(ds.dim(), ds.feature_names.len());
    }
}

#[test]
fn iris_drops_virginica_and_labels_setosa() {
    let ds = load_dataset(DatasetId::Iris, data_root()).unwrap();
    assert_eq!(ds.len(), 100);
    assert_eq!(ds.dim(), 4);
    assert_eq!(ds.dropped_rows, 50);
    // first data row of the file is setosa
    assert_eq!(ds.labels[0], 1);
    assert_eq!(ds.features.row(0).to_vec(), vec![5.1, 3.5, 1.4, 0.2]);
}

#[test]
fn bcw_drops_id_and_missing_rows() {
    let ds = load_dataset(DatasetId::Bcw, data_root()).unwrap();
    assert_eq!(ds.len(), 683);
    assert_eq!(ds.dim(), 9);
    assert_eq!(ds.dropped_rows, 16);
    assert!(ds.features.iter().all(|&v| (1.0..=10.0).contains(&v)));
}

#[test]
fn balloons_is_binary_encoded() {
    let ds = load_dataset(DatasetId::Balloons, data_root()).unwrap();
    assert_eq!(ds.len(), 76);
    assert!(ds.features.iter().all(|&v| v == 0.0 || v == 1.0));
    // accepts the directory itself as well as the data root
    let again = load_dataset(DatasetId::Balloons, data_root().join("balloons")).unwrap();
    assert_eq!(ds, again);
}

#[test]
fn ilpd_adapter_on_synthetic_file() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::new();
    for i in 0..583 {
        let gender = if i % 3 == 0 { "Female" } else { "Male" };
        let ratio = if i < 4 { String::new() } else { format!("{:.2}", 0.5 + (i % 7) as f64 / 10.0) };
        // 414 patients ("1") and 165 non-patients ("2") among the kept rows
        let class = if i < 4 + 414 { 1 } else { 2 };
        writeln!(text, "{},{gender},0.7,0.1,187,16,18,6.8,3.3,{ratio},{class}", 20 + i % 60).unwrap();
    }
    let file = dir.path().join(DatasetId::Ilpd.source_files()[0]);
    fs::write(&file, text).unwrap();
    let ds = load_dataset(DatasetId::Ilpd, dir.path()).unwrap();
    assert_eq!(ds.len(), 579);
    assert_eq!(ds.dropped_rows, 4);
    assert_eq!(ds.class_counts(), (414, 165));
    assert_eq!(ds.dim(), 10);
    // kept rows start at file row 4; file row 6 is the first kept female
    assert_eq!(ds.features[[0, 1]], 1.0);
    assert_eq!(ds.features[[2, 1]], 0.0);
    assert_eq!(ds.labels[0], 0);
    assert_eq!(ds.labels[578], 1);
}

#[test]
fn ba_adapter_on_synthetic_file() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::new();
    for i in 0..1372 {
        let class = u8::from(i >= 762);
        writeln!(text, "{},{},-1.5,0.25,{class}", i as f64 / 100.0, -(i as f64) / 50.0).unwrap();
    }
    let file = dir.path().join(DatasetId::Ba.source_files()[0]);
    fs::write(&file, text).unwrap();
    let ds = load_dataset(DatasetId::Ba, &file).unwrap();
    assert_eq!(ds.class_counts(), (762, 610));
    assert_eq!(ds.dim(), 4);
}

#[test]
fn integrity_errors_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let src = fs::read_to_string(data_root().join("iris/iris.data")).unwrap();

    // one setosa row removed
    let short: String = src.lines().skip(1).map(|l| format!("{l}\n")).collect();
    let f = dir.path().join("iris.data");
    fs::write(&f, short).unwrap();
    assert!(matches!(load_dataset(DatasetId::Iris, &f), Err(DataError::Integrity { .. })));

    // malformed field
    fs::write(&f, src.replacen("5.1", "five", 1)).unwrap();
    assert!(matches!(load_dataset(DatasetId::Iris, &f), Err(DataError::Integrity { .. })));

    // wrong width
    fs::write(&f, src.replacen("Iris-setosa", "0.3,Iris-setosa", 1)).unwrap();
    assert!(matches!(load_dataset(DatasetId::Iris, &f), Err(DataError::Integrity { .. })));

    // missing file
    let empty = tempfile::tempdir().unwrap();
    assert!(matches!(load_dataset(DatasetId::Ba, empty.path()), Err(DataError::Io { .. })));
}

#[test]
fn dataset_splits_keep_both_classes() {
    let ds = load_dataset(DatasetId::Balloons, data_root()).unwrap();
    for seed in 0..200 {
        let s = split_dataset(&ds, 0.9, seed).unwrap();
        assert_eq!(s.train_indices.len(), 68);
        assert_eq!(s.test_indices.len(), 8);
        let pos = s.train_indices.iter().filter(|&&i| ds.labels[i] == 1).count();
        assert!(pos > 0 && pos < 68);
    }
}

#[test]
fn encoded_csv_has_header_and_label_column() {
    let ds = load_dataset(DatasetId::Iris, data_root()).unwrap();
    let mut buf = Vec::new();
    ds.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.ends_with(",label"), "{header}");
    assert_eq!(lines.count(), 100);
}
