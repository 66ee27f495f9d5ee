//! Repeated random-split benchmark harness and report rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use ndarray::{Array2, ArrayView2, Axis};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::binning::{BinGrid, BinStats, BinningError};
use crate::bpnn::{bpnn_train, BpnnConfig, BpnnError};
use crate::chi2nn::{init_network, train, Chi2Error, StopReason, TrainConfig};
use crate::data::{split_dataset, DataError, Dataset, DatasetId};
use crate::model_io::ModelKind;
use crate::pca::{fit_pca, PcaError, PcaScope, PcaVariant};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Pca(#[from] PcaError),
    #[error(transparent)]
    Binning(#[from] BinningError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("every repetition diverged")]
    AllDiverged,
}

/// Inputs the BPNN baseline consumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselineInput {
    #[default]
    Pca,
    Raw,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub chi2nn: TrainConfig,
    pub bpnn: BpnnConfig,
    pub pca_variant: PcaVariant,
    pub pca_scope: PcaScope,
    pub pca_threshold: f64,
    pub train_fraction: f64,
    pub reps: usize,
    pub base_seed: u64,
    pub baseline_input: BaselineInput,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            chi2nn: TrainConfig {
                seed: 42,
                ..TrainConfig::default()
            },
            bpnn: BpnnConfig {
                seed: 42,
                ..BpnnConfig::default()
            },
            pca_variant: PcaVariant::Covariance,
            pca_scope: PcaScope::PreSplit,
            pca_threshold: 0.90,
            train_fraction: 0.9,
            reps: 20,
            base_seed: 42,
            baseline_input: BaselineInput::Pca,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.reps == 0 {
            return Err(ExperimentError::Config("reps must be >= 1".into()));
        }
        if !(self.pca_threshold > 0.0 && self.pca_threshold <= 1.0) {
            return Err(ExperimentError::Config(format!(
                "pca threshold must lie in (0, 1], got {}",
                self.pca_threshold
            )));
        }
        self.chi2nn
            .validate()
            .map_err(|e| ExperimentError::Config(e.to_string()))?;
        self.bpnn
            .validate()
            .map_err(|e| ExperimentError::Config(e.to_string()))?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Repetition {
    /// Seed assigned to this repetition (`base_seed + t`).
    pub seed: u64,
    /// Seed of the split actually used after re-seeding.
    pub split_seed: u64,
    pub components: usize,
    pub test_rows: usize,
    pub accuracy: f64,
    pub epochs: usize,
    /// `chi_square_pass`, `max_epochs`, `degenerate`, `mse_goal`.
    pub stop_reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcludedRepetition {
    pub seed: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub dataset: DatasetId,
    pub model: ModelKind,
    pub config: ExperimentConfig,
    pub repetitions: Vec<Repetition>,
    pub accuracies: Vec<f64>,
    pub mean_accuracy: f64,
    /// Population standard deviation of `accuracies`.
    pub std_accuracy: f64,
    /// Cumulative contribution rates of a PCA fit on the full dataset.
    pub cumulative_contribution: Vec<f64>,
    pub stop_reasons: BTreeMap<String, usize>,
    pub excluded: Vec<ExcludedRepetition>,
    /// Omitted from JSON unless timing is requested, so that reports of
    /// identical runs compare byte for byte.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_clock_seconds: Option<f64>,
}

pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

fn select_rows(x: ArrayView2<f64>, rows: &[usize]) -> Array2<f64> {
    x.select(Axis(0), rows)
}

fn accuracy(pred: &[u8], truth: &[u8]) -> f64 {
    let hits = pred.iter().zip(truth).filter(|(a, b)| a == b).count();
    hits as f64 / truth.len() as f64
}

enum RepOutcome {
    Done(Repetition),
    Diverged(ExcludedRepetition),
}

fn run_repetition(
    ds: &Dataset,
    kind: ModelKind,
    cfg: &ExperimentConfig,
    t: usize,
) -> Result<RepOutcome, ExperimentError> {
    let seed = cfg.base_seed.wrapping_add(t as u64);
    let split = split_dataset(ds, cfg.train_fraction, seed)?;
    let x = ds.features.view();
    let y_train: Vec<u8> = split.train_indices.iter().map(|&i| ds.labels[i]).collect();
    let y_test: Vec<u8> = split.test_indices.iter().map(|&i| ds.labels[i]).collect();
    let x_train_raw = select_rows(x, &split.train_indices);
    let x_test_raw = select_rows(x, &split.test_indices);

    let pca = match cfg.pca_scope {
        PcaScope::PreSplit => fit_pca(x, cfg.pca_variant)?,
        PcaScope::TrainOnly => fit_pca(x_train_raw.view(), cfg.pca_variant)?,
    };
    let components = pca.select_count(cfg.pca_threshold);
    let x_train = pca.project(x_train_raw.view(), components)?;
    let x_test = pca.project(x_test_raw.view(), components)?;

    match kind {
        ModelKind::Chi2nn => {
            let grid = BinGrid::fit(x_train.view(), cfg.chi2nn.k)?;
            let stats = BinStats::from_assignments(
                &grid.assign(x_train.view())?,
                &y_train,
                grid.sections(),
            )?;
            let net = init_network(components, cfg.chi2nn.hidden, seed, cfg.chi2nn.init_scale);
            let train_cfg = TrainConfig { seed, ..cfg.chi2nn };
            match train(net, x_train.view(), &grid, &stats, &train_cfg) {
                Ok((net, trace)) => Ok(RepOutcome::Done(Repetition {
                    seed,
                    split_seed: split.seed,
                    components,
                    test_rows: y_test.len(),
                    accuracy: accuracy(&net.predict_batch(x_test.view()), &y_test),
                    epochs: trace.epochs.len(),
                    stop_reason: stop_name(trace.stop_reason).into(),
                })),
                Err(e @ (Chi2Error::Diverged { .. } | Chi2Error::NonFinite { .. })) => {
                    Ok(RepOutcome::Diverged(ExcludedRepetition {
                        seed,
                        reason: e.to_string(),
                    }))
                }
                Err(e) => Err(ExperimentError::Config(e.to_string())),
            }
        }
        ModelKind::Bpnn => {
            let (train_in, test_in) = match cfg.baseline_input {
                BaselineInput::Pca => (x_train, x_test),
                BaselineInput::Raw => (x_train_raw, x_test_raw),
            };
            let bcfg = BpnnConfig { seed, ..cfg.bpnn };
            match bpnn_train(train_in.view(), &y_train, &bcfg) {
                Ok((net, trace)) => Ok(RepOutcome::Done(Repetition {
                    seed,
                    split_seed: split.seed,
                    components,
                    test_rows: y_test.len(),
                    accuracy: accuracy(&net.predict_batch(test_in.view()), &y_test),
                    epochs: trace.mse.len(),
                    stop_reason: match trace.stop_reason {
                        crate::bpnn::BpnnStop::MseGoal => "mse_goal",
                        crate::bpnn::BpnnStop::MaxEpochs => "max_epochs",
                    }
                    .into(),
                })),
                Err(e @ BpnnError::Diverged { .. }) => Ok(RepOutcome::Diverged(ExcludedRepetition {
                    seed,
                    reason: e.to_string(),
                })),
                Err(e) => Err(ExperimentError::Config(e.to_string())),
            }
        }
    }
}

fn stop_name(reason: StopReason) -> &'static str {
    match reason {
        StopReason::ChiSquarePass => "chi_square_pass",
        StopReason::MaxEpochs => "max_epochs",
        StopReason::Degenerate => "degenerate",
    }
}

/// Runs `cfg.reps` independent repetitions with seeds `base_seed + t`.
///
/// Repetitions execute in parallel; results are ordered by seed.
pub fn run_experiment(
    ds: &Dataset,
    kind: ModelKind,
    cfg: &ExperimentConfig,
) -> Result<ExperimentReport, ExperimentError> {
    cfg.validate()?;
    let start = Instant::now();
    let outcomes = (0..cfg.reps)
        .into_par_iter()
        .map(|t| run_repetition(ds, kind, cfg, t))
        .collect::<Result<Vec<_>, _>>()?;

    let mut repetitions = Vec::new();
    let mut excluded = Vec::new();
    for o in outcomes {
        match o {
            RepOutcome::Done(r) => repetitions.push(r),
            RepOutcome::Diverged(x) => excluded.push(x),
        }
    }
    if repetitions.is_empty() {
        return Err(ExperimentError::AllDiverged);
    }
    let accuracies: Vec<f64> = repetitions.iter().map(|r| r.accuracy).collect();
    let (mean_accuracy, std_accuracy) = mean_std(&accuracies);
    let mut stop_reasons = BTreeMap::new();
    for r in &repetitions {
        *stop_reasons.entry(r.stop_reason.clone()).or_insert(0) += 1;
    }
    let cumulative_contribution = fit_pca(ds.features.view(), cfg.pca_variant)?.cumulative_contribution();
    Ok(ExperimentReport {
        schema_version: REPORT_SCHEMA_VERSION,
        dataset: ds.id,
        model: kind,
        config: *cfg,
        repetitions,
        accuracies,
        mean_accuracy,
        std_accuracy,
        cumulative_contribution,
        stop_reasons,
        excluded,
        wall_clock_seconds: Some(start.elapsed().as_secs_f64()),
    })
}

/// Formats an accuracy in `[0, 1]` as a percentage with two decimals.
pub fn percent(accuracy: f64) -> String {
    format!("{:.2}", accuracy * 100.0)
}

/// Markdown table: one row per dataset, one column per model.
pub fn render_table(reports: &[ExperimentReport]) -> String {
    let mut datasets: Vec<DatasetId> = reports.iter().map(|r| r.dataset).collect();
    datasets.sort();
    datasets.dedup();
    let mut models: Vec<ModelKind> = reports.iter().map(|r| r.model).collect();
    models.sort();
    models.dedup();

    let mut out = String::new();
    write!(out, "| Data sets |").unwrap();
    for m in &models {
        write!(out, " {} |", m.label()).unwrap();
    }
    out.push('\n');
    write!(out, "|---|").unwrap();
    for _ in &models {
        out.push_str("---|");
    }
    out.push('\n');
    for d in datasets {
        write!(out, "| {} |", d.label()).unwrap();
        for m in &models {
            let cell = reports
                .iter()
                .find(|r| r.dataset == d && r.model == *m)
                .map(|r| percent(r.mean_accuracy))
                .unwrap_or_else(|| "-".into());
            write!(out, " {cell} |").unwrap();
        }
        out.push('\n');
    }
    out
}

#[derive(Debug, Serialize)]
struct ReportFile<'a> {
    schema_version: u32,
    reports: &'a [ExperimentReport],
}

/// Pretty-printed JSON containing every report field.
pub fn render_json(reports: &[ExperimentReport], include_timing: bool) -> String {
    let mut owned: Vec<ExperimentReport> = reports.to_vec();
    if !include_timing {
        for r in &mut owned {
            r.wall_clock_seconds = None;
        }
    }
    let file = ReportFile {
        schema_version: REPORT_SCHEMA_VERSION,
        reports: &owned,
    };
    let mut s = serde_json::to_string_pretty(&file).expect("reports serialize");
    s.push('\n');
    s
}

/// Markdown table plus JSON document.
pub fn render_report(reports: &[ExperimentReport], include_timing: bool) -> (String, String) {
    (render_table(reports), render_json(reports, include_timing))
}

/// Reference cumulative contribution rates (percent) of the first PCs.
pub fn reference_cumulative_rates(id: DatasetId) -> &'static [f64] {
    match id {
        DatasetId::Iris => &[86.05, 96.88, 99.42, 100.0],
        DatasetId::Ilpd => &[62.68, 94.34, 99.83, 99.97, 100.0],
        DatasetId::Ba => &[55.39, 87.23, 95.5, 100.0],
        DatasetId::Bcw => &[69.05, 76.25, 82.3, 86.74, 90.64],
        DatasetId::Balloons => &[27.67, 53.88, 77.6, 100.0],
    }
}

/// Reference number of retained components at the 90% threshold.
pub fn reference_component_count(id: DatasetId) -> usize {
    match id {
        DatasetId::Iris => 2,
        DatasetId::Ilpd => 2,
        DatasetId::Ba => 3,
        DatasetId::Bcw => 5,
        DatasetId::Balloons => 4,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContributionRow {
    pub dataset: DatasetId,
    pub variant: PcaVariant,
    /// Percent, first five components at most.
    pub cumulative: Vec<f64>,
    pub reference: Vec<f64>,
    pub selected: usize,
    pub reference_selected: usize,
}

pub fn contribution_row(
    ds: &Dataset,
    variant: PcaVariant,
    threshold: f64,
) -> Result<ContributionRow, ExperimentError> {
    let model = fit_pca(ds.features.view(), variant)?;
    Ok(ContributionRow {
        dataset: ds.id,
        variant,
        cumulative: model
            .cumulative_contribution()
            .iter()
            .take(5)
            .map(|c| c * 100.0)
            .collect(),
        reference: reference_cumulative_rates(ds.id).to_vec(),
        selected: model.select_count(threshold),
        reference_selected: reference_component_count(ds.id),
    })
}

/// Table of computed vs reference cumulative contribution rates.
pub fn render_contribution_table(rows: &[ContributionRow]) -> String {
    let mut out = String::new();
    out.push_str("| Data set | Variant | PC1 | PC2 | PC3 | PC4 | PC5 | L | L (ref) |\n");
    out.push_str("|---|---|---|---|---|---|---|---|---|\n");
    let cell = |v: Option<&f64>| v.map(|v| format!("{v:.2}%")).unwrap_or_else(|| "N/A".into());
    for r in rows {
        write!(out, "| {} | {} |", r.dataset.label(), match r.variant {
            PcaVariant::Covariance => "covariance",
            PcaVariant::Correlation => "correlation",
        })
        .unwrap();
        for i in 0..5 {
            write!(out, " {} ({}) |", cell(r.cumulative.get(i)), cell(r.reference.get(i))).unwrap();
        }
        writeln!(out, " {} | {} |", r.selected, r.reference_selected).unwrap();
    }
    out
}
