//! Loading and encoding of the five UCI benchmark sets, plus seeded
//! train/test splitting.
//!
//! Each dataset has a small adapter that knows its published file layout,
//! how to turn the raw attributes into reals, and which rows are dropped.
//! After encoding, the row count, raw attribute count and class balance are
//! checked against the reference shapes in [`DatasetId::expected_shape`].

use std::fmt;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("i/o error reading {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error in {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("integrity error for {dataset}: {detail}")]
    Integrity { dataset: DatasetId, detail: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unknown dataset id '{0}' (expected iris|ilpd|ba|bcw|balloons)")]
    UnknownId(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetId {
    Iris,
    Ilpd,
    Ba,
    Bcw,
    Balloons,
}

/// Raw attribute count (class column excluded) and class sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpectedShape {
    pub raw_attributes: usize,
    pub negatives: usize,
    pub positives: usize,
}

impl DatasetId {
    pub const ALL: [DatasetId; 5] = [
        DatasetId::Iris,
        DatasetId::Ilpd,
        DatasetId::Ba,
        DatasetId::Bcw,
        DatasetId::Balloons,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DatasetId::Iris => "iris",
            DatasetId::Ilpd => "ilpd",
            DatasetId::Ba => "ba",
            DatasetId::Bcw => "bcw",
            DatasetId::Balloons => "balloons",
        }
    }

    /// Display name used in report tables.
    pub fn label(self) -> &'static str {
        match self {
            DatasetId::Iris => "Iris",
            DatasetId::Ilpd => "ILPD",
            DatasetId::Ba => "BA",
            DatasetId::Bcw => "BCW",
            DatasetId::Balloons => "Balloons",
        }
    }

    pub fn expected_shape(self) -> ExpectedShape {
        let (raw_attributes, negatives, positives) = match self {
            DatasetId::Iris => (4, 50, 50),
            DatasetId::Ilpd => (10, 414, 165),
            DatasetId::Ba => (4, 762, 610),
            DatasetId::Bcw => (10, 444, 239),
            DatasetId::Balloons => (4, 41, 35),
        };
        ExpectedShape {
            raw_attributes,
            negatives,
            positives,
        }
    }

    /// Files making up the published dataset, relative to its directory.
    pub fn source_files(self) -> &'static [&'static str] {
        match self {
            DatasetId::Iris => &["iris.data"],
            DatasetId::Ilpd => &["Indian Liver Patient Dataset (ILPD).csv"],
            DatasetId::Ba => &["data_banknote_authentication.txt"],
            DatasetId::Bcw => &["breast-cancer-wisconsin.data"],
            DatasetId::Balloons => &[
                "adult+stretch.data",
                "adult-stretch.data",
                "yellow-small+adult-stretch.data",
                "yellow-small.data",
            ],
        }
    }

    fn feature_names(self) -> Vec<String> {
        let names: &[&str] = match self {
            DatasetId::Iris => &["sepal_length", "sepal_width", "petal_length", "petal_width"],
            DatasetId::Ilpd => &[
                "age",
                "gender_male",
                "total_bilirubin",
                "direct_bilirubin",
                "alkaline_phosphotase",
                "alamine_aminotransferase",
                "aspartate_aminotransferase",
                "total_proteins",
                "albumin",
                "albumin_globulin_ratio",
            ],
            DatasetId::Ba => &["variance", "skewness", "curtosis", "entropy"],
            DatasetId::Bcw => &[
                "clump_thickness",
                "cell_size_uniformity",
                "cell_shape_uniformity",
                "marginal_adhesion",
                "single_epithelial_cell_size",
                "bare_nuclei",
                "bland_chromatin",
                "normal_nucleoli",
                "mitoses",
            ],
            DatasetId::Balloons => &["color_yellow", "size_small", "act_stretch", "age_adult"],
        };
        names.iter().map(|s| s.to_string()).collect()
    }
}

impl fmt::Display for DatasetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DatasetId {
    type Err = DataError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "iris" => Ok(DatasetId::Iris),
            "ilpd" => Ok(DatasetId::Ilpd),
            "ba" | "banknote" => Ok(DatasetId::Ba),
            "bcw" => Ok(DatasetId::Bcw),
            "balloons" => Ok(DatasetId::Balloons),
            other => Err(DataError::UnknownId(other.to_string())),
        }
    }
}

/// An encoded binary classification dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub id: DatasetId,
    pub features: Array2<f64>,
    pub labels: Vec<u8>,
    pub feature_names: Vec<String>,
    /// Rows removed by the adapter (incomplete records, unused classes).
    pub dropped_rows: usize,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.features.ncols()
    }

    /// `(negatives, positives)`.
    pub fn class_counts(&self) -> (usize, usize) {
        let pos = self.labels.iter().filter(|&&y| y == 1).count();
        (self.labels.len() - pos, pos)
    }

    /// Writes the encoded matrix as CSV: header row, label column last.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = self.feature_names.clone();
        header.push("label".into());
        w.write_record(&header)?;
        for (row, &y) in self.features.rows().into_iter().zip(&self.labels) {
            let mut rec: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            rec.push(y.to_string());
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Resolves the file(s) for `id` under `source_path`, which may be the
/// dataset directory itself, a data root containing `<id>/`, or (for
/// single-file datasets) the file.
fn resolve_files(id: DatasetId, source_path: &Path) -> Vec<PathBuf> {
    if source_path.is_file() {
        return vec![source_path.to_path_buf()];
    }
    let direct = id.source_files().iter().all(|f| source_path.join(f).is_file());
    let dir = if direct {
        source_path.to_path_buf()
    } else {
        source_path.join(id.as_str())
    };
    id.source_files().iter().map(|f| dir.join(f)).collect()
}

fn read_records(path: &Path) -> Result<Vec<Vec<String>>, DataError> {
    let file = File::open(path).map_err(|source| DataError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|source| DataError::Csv {
            path: path.to_path_buf(),
            source,
        })?;
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        rows.push(rec.iter().map(str::to_string).collect());
    }
    Ok(rows)
}

/// A first row counts as a header when its probe column is not numeric.
fn strip_header(rows: &mut Vec<Vec<String>>, probe_column: usize) {
    if let Some(first) = rows.first() {
        let numeric = first
            .get(probe_column)
            .map(|f| f.parse::<f64>().is_ok())
            .unwrap_or(false);
        if !numeric {
            rows.remove(0);
        }
    }
}

struct Encoded {
    rows: Vec<Vec<f64>>,
    labels: Vec<u8>,
    dropped: usize,
}

fn integrity(id: DatasetId, detail: impl Into<String>) -> DataError {
    DataError::Integrity {
        dataset: id,
        detail: detail.into(),
    }
}

fn parse_num(id: DatasetId, field: &str, line: usize) -> Result<f64, DataError> {
    let v: f64 = field
        .parse()
        .map_err(|_| integrity(id, format!("row {line}: non-numeric field '{field}'")))?;
    if !v.is_finite() {
        return Err(integrity(id, format!("row {line}: non-finite value '{field}'")));
    }
    Ok(v)
}

fn check_width(id: DatasetId, row: &[String], line: usize) -> Result<(), DataError> {
    let expected = id.expected_shape().raw_attributes + 1;
    if row.len() != expected {
        return Err(integrity(
            id,
            format!(
                "row {line}: expected {expected} columns ({} attributes + class), found {}",
                expected - 1,
                row.len()
            ),
        ));
    }
    Ok(())
}

fn encode_iris(rows: Vec<Vec<String>>) -> Result<Encoded, DataError> {
    let id = DatasetId::Iris;
    let mut out = Encoded {
        rows: Vec::new(),
        labels: Vec::new(),
        dropped: 0,
    };
    for (line, row) in rows.iter().enumerate() {
        check_width(id, row, line)?;
        let label = match row[4].as_str() {
            "Iris-setosa" => 1,
            "Iris-versicolor" => 0,
            "Iris-virginica" => {
                out.dropped += 1;
                continue;
            }
            other => return Err(integrity(id, format!("row {line}: unknown class '{other}'"))),
        };
        let feats = row[..4]
            .iter()
            .map(|f| parse_num(id, f, line))
            .collect::<Result<Vec<_>, _>>()?;
        out.rows.push(feats);
        out.labels.push(label);
    }
    Ok(out)
}

/// Patients are the negative class so that class sizes line up with the
/// reference (414 negatives / 165 positives after dropping the four rows
/// without an albumin/globulin ratio).
fn encode_ilpd(rows: Vec<Vec<String>>) -> Result<Encoded, DataError> {
    let id = DatasetId::Ilpd;
    let mut out = Encoded {
        rows: Vec::new(),
        labels: Vec::new(),
        dropped: 0,
    };
    for (line, row) in rows.iter().enumerate() {
        check_width(id, row, line)?;
        if row[..10].iter().any(|f| f.is_empty() || f == "?") {
            out.dropped += 1;
            continue;
        }
        let mut feats = Vec::with_capacity(10);
        for (col, field) in row[..10].iter().enumerate() {
            if col == 1 {
                feats.push(match field.to_ascii_lowercase().as_str() {
                    "male" => 1.0,
                    "female" => 0.0,
                    other => {
                        return Err(integrity(id, format!("row {line}: unknown gender '{other}'")))
                    }
                });
            } else {
                feats.push(parse_num(id, field, line)?);
            }
        }
        let label = match row[10].as_str() {
            "1" => 0,
            "2" => 1,
            other => return Err(integrity(id, format!("row {line}: unknown class '{other}'"))),
        };
        out.rows.push(feats);
        out.labels.push(label);
    }
    Ok(out)
}

fn encode_ba(rows: Vec<Vec<String>>) -> Result<Encoded, DataError> {
    let id = DatasetId::Ba;
    let mut out = Encoded {
        rows: Vec::new(),
        labels: Vec::new(),
        dropped: 0,
    };
    for (line, row) in rows.iter().enumerate() {
        check_width(id, row, line)?;
        let feats = row[..4]
            .iter()
            .map(|f| parse_num(id, f, line))
            .collect::<Result<Vec<_>, _>>()?;
        let label = match row[4].as_str() {
            "0" => 0,
            "1" => 1,
            other => return Err(integrity(id, format!("row {line}: unknown class '{other}'"))),
        };
        out.rows.push(feats);
        out.labels.push(label);
    }
    Ok(out)
}

fn encode_bcw(rows: Vec<Vec<String>>) -> Result<Encoded, DataError> {
    let id = DatasetId::Bcw;
    let mut out = Encoded {
        rows: Vec::new(),
        labels: Vec::new(),
        dropped: 0,
    };
    for (line, row) in rows.iter().enumerate() {
        check_width(id, row, line)?;
        if row[1..10].iter().any(|f| f == "?" || f.is_empty()) {
            out.dropped += 1;
            continue;
        }
        let feats = row[1..10]
            .iter()
            .map(|f| parse_num(id, f, line))
            .collect::<Result<Vec<_>, _>>()?;
        let label = match row[10].as_str() {
            "2" => 0,
            "4" => 1,
            other => return Err(integrity(id, format!("row {line}: unknown class '{other}'"))),
        };
        out.rows.push(feats);
        out.labels.push(label);
    }
    Ok(out)
}

fn encode_balloons(rows: Vec<Vec<String>>) -> Result<Encoded, DataError> {
    let id = DatasetId::Balloons;
    const LEVELS: [(&str, &str); 4] = [
        ("YELLOW", "PURPLE"),
        ("SMALL", "LARGE"),
        ("STRETCH", "DIP"),
        ("ADULT", "CHILD"),
    ];
    let mut out = Encoded {
        rows: Vec::new(),
        labels: Vec::new(),
        dropped: 0,
    };
    for (line, row) in rows.iter().enumerate() {
        check_width(id, row, line)?;
        let mut feats = Vec::with_capacity(4);
        for (field, (one, zero)) in row[..4].iter().zip(LEVELS) {
            let v = if field.eq_ignore_ascii_case(one) {
                1.0
            } else if field.eq_ignore_ascii_case(zero) {
                0.0
            } else {
                return Err(integrity(
                    id,
                    format!("row {line}: expected {one} or {zero}, found '{field}'"),
                ));
            };
            feats.push(v);
        }
        let label = match row[4].as_str() {
            "T" => 1,
            "F" => 0,
            other => return Err(integrity(id, format!("row {line}: unknown class '{other}'"))),
        };
        out.rows.push(feats);
        out.labels.push(label);
    }
    Ok(out)
}

/// Loads and encodes one dataset.
pub fn load_dataset(id: DatasetId, source_path: impl AsRef<Path>) -> Result<Dataset, DataError> {
    let files = resolve_files(id, source_path.as_ref());
    let mut rows = Vec::new();
    for path in &files {
        let mut file_rows = read_records(path)?;
        match id {
            DatasetId::Balloons => {
                if let Some(first) = file_rows.first() {
                    let known = ["YELLOW", "PURPLE"];
                    if !known.iter().any(|k| first[0].eq_ignore_ascii_case(k)) {
                        file_rows.remove(0);
                    }
                }
            }
            _ => strip_header(&mut file_rows, 0),
        }
        rows.extend(file_rows);
    }
    if rows.is_empty() {
        return Err(integrity(id, "no data rows found"));
    }

    let encoded = match id {
        DatasetId::Iris => encode_iris(rows)?,
        DatasetId::Ilpd => encode_ilpd(rows)?,
        DatasetId::Ba => encode_ba(rows)?,
        DatasetId::Bcw => encode_bcw(rows)?,
        DatasetId::Balloons => encode_balloons(rows)?,
    };

    let n = encoded.rows.len();
    let d = id.feature_names().len();
    let mut features = Array2::zeros((n, d));
    for (i, row) in encoded.rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            features[[i, j]] = v;
        }
    }
    let ds = Dataset {
        id,
        features,
        labels: encoded.labels,
        feature_names: id.feature_names(),
        dropped_rows: encoded.dropped,
    };

    let expected = id.expected_shape();
    let (neg, pos) = ds.class_counts();
    if neg != expected.negatives || pos != expected.positives {
        return Err(integrity(
            id,
            format!(
                "expected {} rows ({} negative / {} positive), found {} rows ({neg} / {pos})",
                expected.negatives + expected.positives,
                expected.negatives,
                expected.positives,
                ds.len(),
            ),
        ));
    }
    Ok(ds)
}

/// A reproducible train/test partition of row indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Split {
    pub train_indices: Vec<usize>,
    pub test_indices: Vec<usize>,
    /// Seed that produced this split (may be larger than the requested seed
    /// after re-seeding, see [`split_dataset`]).
    pub seed: u64,
    pub train_fraction: f64,
}

/// Number of training rows for `n` rows at `train_fraction`.
pub fn train_size(n: usize, train_fraction: f64) -> usize {
    (train_fraction * n as f64).round() as usize
}

/// Uniform random permutation under `seed`; the first `round(f·n)` rows train.
pub fn split_indices(n: usize, train_fraction: f64, seed: u64) -> Result<Split, DataError> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(DataError::Domain(format!(
            "train fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    if n < 2 {
        return Err(DataError::Domain(format!("need at least 2 rows to split, got {n}")));
    }
    let n_train = train_size(n, train_fraction);
    if n_train == 0 || n_train == n {
        return Err(DataError::Domain(format!(
            "train fraction {train_fraction} leaves an empty partition for n = {n}"
        )));
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    perm.shuffle(&mut rng);
    let test_indices = perm.split_off(n_train);
    Ok(Split {
        train_indices: perm,
        test_indices,
        seed,
        train_fraction,
    })
}

/// Maximum number of derived seeds tried before giving up on a split whose
/// training side contains both classes.
pub const MAX_RESEED_ATTEMPTS: u64 = 1_000;

/// Splits `ds`, moving to `seed + 1, seed + 2, …` while the training side
/// lacks one of the classes.
pub fn split_dataset(ds: &Dataset, train_fraction: f64, seed: u64) -> Result<Split, DataError> {
    for attempt in 0..MAX_RESEED_ATTEMPTS {
        let split = split_indices(ds.len(), train_fraction, seed.wrapping_add(attempt))?;
        let pos = split
            .train_indices
            .iter()
            .filter(|&&i| ds.labels[i] == 1)
            .count();
        if pos > 0 && pos < split.train_indices.len() {
            return Ok(split);
        }
    }
    Err(DataError::Domain(format!(
        "no split with both classes in training after {MAX_RESEED_ATTEMPTS} seeds"
    )))
}
