//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 data integrity
//! or I/O error, 3 numeric divergence in at least one repetition.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::binning::EmptySections;
use crate::chi2nn::{GradientMode, TrainConfig};
use crate::bpnn::BpnnConfig;
use crate::data::{load_dataset, DataError, DatasetId};
use crate::experiment::{
    contribution_row, render_contribution_table, render_report, run_experiment, BaselineInput,
    ExperimentConfig, ExperimentError,
};
use crate::model_io::ModelKind;
use crate::pca::{PcaScope, PcaVariant};
use crate::stats::EpsilonMode;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_DIVERGENCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "chi2nn", version, about = "Chi-square test neural network benchmark harness")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the repeated random-split accuracy benchmark.
    Run(RunArgs),
    /// Print PCA cumulative contribution rates beside the reference values.
    Table2(Table2Args),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelChoice {
    Chi2nn,
    Bpnn,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EpsilonChoice {
    Quantile,
    Df,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GradientChoice {
    Corrected,
    Paper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EmptySectionChoice {
    Strict,
    Skip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScopeChoice {
    #[value(name = "pre_split")]
    PreSplit,
    #[value(name = "train_only")]
    TrainOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantChoice {
    Covariance,
    Correlation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BaselineChoice {
    Pca,
    Raw,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Dataset id (iris, ilpd, ba, bcw, balloons) or `all`.
    #[arg(long, default_value = "all")]
    pub dataset: String,
    #[arg(long, value_enum, default_value = "both")]
    pub model: ModelChoice,
    /// Directory holding one sub-directory per dataset.
    #[arg(long, default_value = "data")]
    pub data_dir: PathBuf,
    /// Sections per PCA dimension.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Surrogate output derivative.
    #[arg(long, default_value_t = 0.5)]
    pub xi: f64,
    /// Learning rate (both models).
    #[arg(long, default_value_t = 0.1)]
    pub lr: f64,
    #[arg(long, default_value_t = 10)]
    pub hidden: usize,
    #[arg(long, default_value_t = 0.90)]
    pub pca_threshold: f64,
    #[arg(long, value_enum, default_value = "pre_split")]
    pub pca_scope: ScopeChoice,
    #[arg(long, value_enum, default_value = "covariance")]
    pub pca_variant: VariantChoice,
    #[arg(long, default_value_t = 0.9)]
    pub train_frac: f64,
    #[arg(long, default_value_t = 20)]
    pub reps: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 5000)]
    pub max_epochs: usize,
    /// Upper-tail significance for the chi-square stopping threshold.
    #[arg(long, default_value_t = 0.05)]
    pub significance: f64,
    #[arg(long, value_enum, default_value = "quantile")]
    pub epsilon_mode: EpsilonChoice,
    #[arg(long, value_enum, default_value = "corrected")]
    pub gradient_mode: GradientChoice,
    /// Treatment of sections with no positive training rows in the statistic.
    #[arg(long, value_enum, default_value = "strict")]
    pub empty_sections: EmptySectionChoice,
    #[arg(long, default_value_t = 0.5)]
    pub init_scale: f64,
    /// BPNN stopping target.
    #[arg(long, default_value_t = 1e-3)]
    pub mse_goal: f64,
    /// Features fed to the BPNN baseline.
    #[arg(long, value_enum, default_value = "pca")]
    pub baseline_input: BaselineChoice,
    /// JSON report path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the markdown table here.
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Directory to write each encoded dataset as `<id>.csv`.
    #[arg(long)]
    pub dump_encoded: Option<PathBuf>,
    /// Include wall-clock seconds in the JSON report.
    #[arg(long)]
    pub record_timing: bool,
}

#[derive(Debug, Args)]
pub struct Table2Args {
    #[arg(long, default_value = "all")]
    pub dataset: String,
    #[arg(long, default_value = "data")]
    pub data_dir: PathBuf,
    #[arg(long, default_value_t = 0.90)]
    pub pca_threshold: f64,
    /// Write the rows as JSON here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_datasets(spec: &str) -> Result<Vec<DatasetId>, DataError> {
    if spec.eq_ignore_ascii_case("all") {
        return Ok(DatasetId::ALL.to_vec());
    }
    spec.split(',').map(|s| s.trim().parse()).collect()
}

impl RunArgs {
    pub fn experiment_config(&self) -> ExperimentConfig {
        let epsilon = match self.epsilon_mode {
            EpsilonChoice::Quantile => EpsilonMode::Quantile {
                significance_alpha: self.significance,
            },
            EpsilonChoice::Df => EpsilonMode::DfMean,
        };
        ExperimentConfig {
            chi2nn: TrainConfig {
                k: self.k,
                xi: self.xi,
                rho: self.lr,
                hidden: self.hidden,
                epsilon,
                max_epochs: self.max_epochs,
                gradient_mode: match self.gradient_mode {
                    GradientChoice::Corrected => GradientMode::Corrected,
                    GradientChoice::Paper => GradientMode::PaperLiteral,
                },
                empty_sections: match self.empty_sections {
                    EmptySectionChoice::Strict => EmptySections::Strict,
                    EmptySectionChoice::Skip => EmptySections::Skip,
                },
                seed: self.seed,
                init_scale: self.init_scale,
            },
            bpnn: BpnnConfig {
                hidden: self.hidden,
                rho: self.lr,
                mse_goal: self.mse_goal,
                max_epochs: self.max_epochs,
                seed: self.seed,
                init_scale: self.init_scale,
            },
            pca_variant: match self.pca_variant {
                VariantChoice::Covariance => PcaVariant::Covariance,
                VariantChoice::Correlation => PcaVariant::Correlation,
            },
            pca_scope: match self.pca_scope {
                ScopeChoice::PreSplit => PcaScope::PreSplit,
                ScopeChoice::TrainOnly => PcaScope::TrainOnly,
            },
            pca_threshold: self.pca_threshold,
            train_fraction: self.train_frac,
            reps: self.reps,
            base_seed: self.seed,
            baseline_input: match self.baseline_input {
                BaselineChoice::Pca => BaselineInput::Pca,
                BaselineChoice::Raw => BaselineInput::Raw,
            },
        }
    }

    fn models(&self) -> Vec<ModelKind> {
        match self.model {
            ModelChoice::Chi2nn => vec![ModelKind::Chi2nn],
            ModelChoice::Bpnn => vec![ModelKind::Bpnn],
            ModelChoice::Both => vec![ModelKind::Chi2nn, ModelKind::Bpnn],
        }
    }
}

fn experiment_exit(e: &ExperimentError) -> i32 {
    match e {
        ExperimentError::Data(_) => EXIT_DATA,
        ExperimentError::AllDiverged => EXIT_DIVERGENCE,
        _ => EXIT_USAGE,
    }
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), i32> {
    fs::write(path, contents).map_err(|e| {
        eprintln!("error: cannot write {}: {e}", path.display());
        EXIT_DATA
    })
}

fn run_benchmark(args: &RunArgs) -> Result<i32, i32> {
    let ids = parse_datasets(&args.dataset).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_USAGE
    })?;
    let cfg = args.experiment_config();
    cfg.validate().map_err(|e| {
        eprintln!("error: {e}");
        EXIT_USAGE
    })?;

    let mut datasets = Vec::new();
    for id in ids {
        let ds = load_dataset(id, &args.data_dir).map_err(|e| {
            eprintln!("error: {e}");
            EXIT_DATA
        })?;
        if let Some(dir) = &args.dump_encoded {
            fs::create_dir_all(dir).map_err(|_| EXIT_DATA)?;
            let path = dir.join(format!("{id}.csv"));
            let file = fs::File::create(&path).map_err(|e| {
                eprintln!("error: cannot write {}: {e}", path.display());
                EXIT_DATA
            })?;
            ds.write_csv(file).map_err(|e| {
                eprintln!("error: {e}");
                EXIT_DATA
            })?;
        }
        datasets.push(ds);
    }

    let mut reports = Vec::new();
    for ds in &datasets {
        for kind in args.models() {
            let report = run_experiment(ds, kind, &cfg).map_err(|e| {
                eprintln!("error: {}/{}: {e}", ds.id, kind.as_str());
                experiment_exit(&e)
            })?;
            eprintln!(
                "{:<9} {:<7} mean {:>6}%  std {:>5}  stops {:?}{}",
                ds.id.label(),
                kind.label(),
                crate::experiment::percent(report.mean_accuracy),
                crate::experiment::percent(report.std_accuracy),
                report.stop_reasons,
                if report.excluded.is_empty() {
                    String::new()
                } else {
                    format!("  excluded {}", report.excluded.len())
                }
            );
            reports.push(report);
        }
    }

    let (table, json) = render_report(&reports, args.record_timing);
    println!("{table}");
    if let Some(path) = &args.out {
        write_file(path, &json)?;
    }
    if let Some(path) = &args.table {
        write_file(path, &table)?;
    }
    if reports.iter().any(|r| !r.excluded.is_empty()) {
        return Ok(EXIT_DIVERGENCE);
    }
    Ok(EXIT_OK)
}

fn run_table2(args: &Table2Args) -> Result<i32, i32> {
    let ids = parse_datasets(&args.dataset).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_USAGE
    })?;
    let mut rows = Vec::new();
    for id in ids {
        let ds = load_dataset(id, &args.data_dir).map_err(|e| {
            eprintln!("error: {e}");
            EXIT_DATA
        })?;
        for variant in [PcaVariant::Covariance, PcaVariant::Correlation] {
            rows.push(contribution_row(&ds, variant, args.pca_threshold).map_err(|e| {
                eprintln!("error: {e}");
                EXIT_USAGE
            })?);
        }
    }
    println!("{}", render_contribution_table(&rows));
    if let Some(path) = &args.out {
        let json = serde_json::to_string_pretty(&rows).expect("rows serialize");
        write_file(path, &json)?;
    }
    Ok(EXIT_OK)
}

/// Parses `args` and runs the selected command, returning the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Run(args) => run_benchmark(args),
        Command::Table2(args) => run_table2(args),
    };
    result.unwrap_or_else(|code| code)
}
