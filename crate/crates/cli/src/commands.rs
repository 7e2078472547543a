//! Subcommand surface: flag parsing, pipeline wiring, and JSON/CSV output.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use adequacy_core::bootstrap::{
    bootstrap_statistic, BootstrapConfig, BootstrapError, BootstrapSummary, ResampleMode,
};
use adequacy_core::capacity_value::{
    efc_hindcast, elcc_hindcast, garver_efc, garver_fit, small_capacity_efc, CapacityValueError,
    CapacityValueResult, GarverFit,
};
use adequacy_core::copt::{build_copt, CapacityDistribution, CdfMode, CoptError};
use adequacy_core::risk::{lole, lole_contributions, margin_cdf, DemandWindRecord, RiskError};

use crate::ingest::{self, IngestError};
use crate::scenario::{load_file_config, FileConfig, ScenarioArgs, ScenarioConfig};
use crate::synth::{generate_synthetic, SynthError, SyntheticSpec};
use crate::transform::{rescale, top_n_by_demand, TransformError};

#[derive(Debug)]
pub enum CliError {
    /// Unreadable files, schema violations, bad flags. Exit code 1.
    Input(String),
    /// Degenerate or failed numerics on valid input. Exit code 2.
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "{m}"),
            CliError::Numerical(m) => write!(f, "{m}"),
        }
    }
}

impl From<IngestError> for CliError {
    fn from(e: IngestError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<TransformError> for CliError {
    fn from(e: TransformError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<CoptError> for CliError {
    fn from(e: CoptError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<RiskError> for CliError {
    fn from(e: RiskError) -> Self {
        match e {
            RiskError::ZeroLole => CliError::Numerical(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<CapacityValueError> for CliError {
    fn from(e: CapacityValueError) -> Self {
        match e {
            CapacityValueError::EmptyRecords | CapacityValueError::NonPositiveTolerance(_) => {
                CliError::Input(e.to_string())
            }
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<BootstrapError> for CliError {
    fn from(e: BootstrapError) -> Self {
        match e {
            BootstrapError::EmptyRecords
            | BootstrapError::EmptyValues
            | BootstrapError::InvalidCiLevel(_)
            | BootstrapError::ZeroReplicates => CliError::Input(e.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<SynthError> for CliError {
    fn from(e: SynthError) -> Self {
        match e {
            SynthError::Infeasible(_) => CliError::Numerical(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "adequacy",
    version,
    about = "Generation adequacy risk and capacity value toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Build a capacity outage probability table from a units CSV
    Copt(CoptArgs),
    /// Loss-of-load expectation over a records CSV
    Lole(LoleArgs),
    /// Ranked per-record LOLE contribution curve
    Contrib(ContribArgs),
    /// Hindcast equivalent firm capacity of the wind series
    Efc(SolveArgs),
    /// Hindcast effective load carrying capability of the wind series
    Elcc(SolveArgs),
    /// Exponential-tail fit of the margin and the Garver capacity value
    Garver(GarverArgs),
    /// Small-capacity approximation of the capacity value
    SmallCap(SmallCapArgs),
    /// Bootstrap confidence interval for a statistic over the records
    Bootstrap(BootstrapArgs),
    /// Generate a synthetic dataset with an exponential margin tail
    Synth(SynthArgs),
}

#[derive(clap::Args)]
pub struct CoptArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
}

#[derive(clap::Args)]
pub struct LoleArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
}

#[derive(clap::Args)]
pub struct ContribArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    /// Curve CSV path (default: --out with a .csv extension)
    #[arg(long)]
    pub curve_out: Option<PathBuf>,
}

#[derive(clap::Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
}

#[derive(clap::Args)]
pub struct GarverArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    /// Bottom of the margin fit window, MW
    #[arg(long, allow_hyphen_values = true)]
    pub window_min: f64,
    /// Top of the margin fit window, MW
    #[arg(long, allow_hyphen_values = true)]
    pub window_max: f64,
    /// Number of evenly spaced fit points across the window
    #[arg(long, default_value_t = 25)]
    pub window_points: usize,
}

#[derive(clap::Args)]
pub struct SmallCapArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
}

#[derive(clap::Args)]
pub struct BootstrapArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    /// Statistic to bootstrap: lole | efc | elcc
    #[arg(long)]
    pub statistic: String,
    /// Resample demand and wind independently instead of as pairs
    #[arg(long)]
    pub independent_marginals: bool,
    /// Resample the full dataset and re-apply the top-n filter per replicate
    #[arg(long)]
    pub refilter_top_n: bool,
    /// Replicate values CSV (`replicate,value`)
    #[arg(long)]
    pub values_out: Option<PathBuf>,
}

#[derive(clap::Args)]
pub struct SynthArgs {
    /// Exponential tail rate of the designed margin, per MW
    #[arg(long)]
    pub lambda: f64,
    /// Margin CDF at zero (the tail scale c)
    #[arg(long)]
    pub tail_scale: f64,
    #[arg(long)]
    pub grid_step: f64,
    /// Number of records to generate
    #[arg(long)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Wind pmf as `mw:prob,mw:prob,...`
    #[arg(long)]
    pub y_pmf: String,
    #[arg(long, default_value_t = 1000.0)]
    pub demand_base: f64,
    /// Uniform demand jitter above the base, in grid steps
    #[arg(long, default_value_t = 100)]
    pub demand_spread_steps: u32,
    /// MW of exponential region above the maximum demand
    #[arg(long, default_value_t = 0.0)]
    pub tail_headroom: f64,
    /// Where to write the generated records CSV
    #[arg(long)]
    pub records_out: PathBuf,
    /// Where to write the generated capacity table JSON
    #[arg(long)]
    pub copt_out: PathBuf,
    /// Summary JSON path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Entry point shared by main() and the integration tests. Returns the
/// process exit code: 0 on success, 1 on input errors, 2 on numerical
/// failures (including flagged degenerate solves).
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Copt(args) => handle_copt(args),
        Command::Lole(args) => handle_lole(args),
        Command::Contrib(args) => handle_contrib(args),
        Command::Efc(args) => handle_solve(args, Solver::Efc),
        Command::Elcc(args) => handle_solve(args, Solver::Elcc),
        Command::Garver(args) => handle_garver(args),
        Command::SmallCap(args) => handle_small_cap(args),
        Command::Bootstrap(args) => handle_bootstrap(args),
        Command::Synth(args) => handle_synth(args),
    }
}

struct Loaded {
    config: ScenarioConfig,
    fx: CapacityDistribution,
    records: Vec<DemandWindRecord>,
    warnings: Vec<String>,
}

fn resolve_config(args: &ScenarioArgs) -> Result<ScenarioConfig, CliError> {
    let file = match &args.config {
        Some(path) => load_file_config(path).map_err(CliError::Input)?,
        None => FileConfig::default(),
    };
    ScenarioConfig::resolve(args, &file).map_err(CliError::Input)
}

fn load_fx(config: &ScenarioConfig) -> Result<CapacityDistribution, CliError> {
    match (&config.units_path, &config.copt_path) {
        (Some(units), _) => {
            let step = config.grid_step_mw.ok_or_else(|| {
                CliError::Input("--grid-step is required with --units".to_string())
            })?;
            let units = ingest::read_units_csv(Path::new(units))?;
            Ok(build_copt(&units, step)?)
        }
        (None, Some(copt)) => Ok(ingest::read_copt_json(Path::new(copt))?),
        (None, None) => Err(CliError::Input(
            "provide a capacity source: --units with --grid-step, or --copt".to_string(),
        )),
    }
}

/// Reads and transforms the record series: hour aggregation, rescaling,
/// then (unless deferred for per-replicate refiltering) the top-n filter.
fn load_records(
    config: &ScenarioConfig,
    apply_top_n: bool,
    warnings: &mut Vec<String>,
) -> Result<Vec<DemandWindRecord>, CliError> {
    let path = config
        .records_path
        .as_ref()
        .ok_or_else(|| CliError::Input("--records is required".to_string()))?;
    let mut records = ingest::read_records_csv(Path::new(path))?;
    if config.aggregate_hours {
        records = ingest::aggregate_to_hours(&records);
    }
    records = rescale(&records, config.wind_scale, config.demand_scale)?;
    if apply_top_n {
        if let Some(n) = config.top_n {
            let count = records.len();
            let (kept, clamped) = top_n_by_demand(&records, n)?;
            if clamped {
                warnings.push(format!(
                    "top_n {n} exceeds record count {count}; using all records"
                ));
            }
            records = kept;
        }
    }
    Ok(records)
}

fn load_scenario(args: &ScenarioArgs) -> Result<Loaded, CliError> {
    let config = resolve_config(args)?;
    let mut warnings = Vec::new();
    let fx = load_fx(&config)?;
    let records = load_records(&config, true, &mut warnings)?;
    Ok(Loaded { config, fx, records, warnings })
}

fn emit_json<T: Serialize>(out: &Option<String>, value: &T) -> Result<(), CliError> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| CliError::Input(e.to_string()))?;
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Input(format!("{path}: {e}")))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct CoptOutput<'a> {
    config: &'a ScenarioConfig,
    warnings: &'a [String],
    unit_count: Option<usize>,
    grid_step_mw: f64,
    mean_mw: f64,
    min_mw: f64,
    max_mw: f64,
    support_mw: &'a [f64],
    pmf: &'a [f64],
}

fn handle_copt(args: CoptArgs) -> Result<i32, CliError> {
    let config = resolve_config(&args.scenario)?;
    let unit_count = match &config.units_path {
        Some(path) => Some(ingest::read_units_csv(Path::new(path))?.len()),
        None => None,
    };
    let fx = load_fx(&config)?;
    emit_json(
        &config.output_path.clone(),
        &CoptOutput {
            config: &config,
            warnings: &[],
            unit_count,
            grid_step_mw: fx.grid_step(),
            mean_mw: fx.mean(),
            min_mw: fx.min_support(),
            max_mw: fx.max_support(),
            support_mw: fx.support(),
            pmf: fx.pmf(),
        },
    )?;
    Ok(0)
}

#[derive(Serialize)]
struct LoleOutput<'a> {
    config: &'a ScenarioConfig,
    warnings: &'a [String],
    record_count: usize,
    lole: f64,
    lole_per_record: f64,
    max_lolp: f64,
}

fn handle_lole(args: LoleArgs) -> Result<i32, CliError> {
    let loaded = load_scenario(&args.scenario)?;
    let result = lole(&loaded.fx, &loaded.records, loaded.config.cdf_mode)?;
    emit_json(
        &loaded.config.output_path.clone(),
        &LoleOutput {
            config: &loaded.config,
            warnings: &loaded.warnings,
            record_count: loaded.records.len(),
            lole: result.lole,
            lole_per_record: result.lole / loaded.records.len() as f64,
            max_lolp: result.max_lolp,
        },
    )?;
    Ok(0)
}

#[derive(Serialize)]
struct ContribOutput<'a> {
    config: &'a ScenarioConfig,
    warnings: &'a [String],
    record_count: usize,
    total_lole: f64,
    curve_csv: String,
}

fn handle_contrib(args: ContribArgs) -> Result<i32, CliError> {
    let loaded = load_scenario(&args.scenario)?;
    let curve_path = args
        .curve_out
        .clone()
        .or_else(|| loaded.config.output_path.as_ref().map(|p| PathBuf::from(p).with_extension("csv")))
        .ok_or_else(|| CliError::Input("contrib needs --curve-out or --out".to_string()))?;
    let curve = lole_contributions(&loaded.fx, &loaded.records, loaded.config.cdf_mode)?;
    let mut csv = String::from("rank,net_demand_mw,lolp,cumulative_share\n");
    for entry in &curve.entries {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            entry.rank, entry.net_demand_mw, entry.lolp, entry.cumulative_share
        ));
    }
    write_text(&curve_path, &csv)?;
    emit_json(
        &loaded.config.output_path.clone(),
        &ContribOutput {
            config: &loaded.config,
            warnings: &loaded.warnings,
            record_count: loaded.records.len(),
            total_lole: curve.total_lole,
            curve_csv: curve_path.display().to_string(),
        },
    )?;
    Ok(0)
}

#[derive(Clone, Copy)]
enum Solver {
    Efc,
    Elcc,
}

#[derive(Serialize)]
struct SolveOutput<'a> {
    config: &'a ScenarioConfig,
    warnings: &'a [String],
    record_count: usize,
    result: &'a CapacityValueResult,
}

fn handle_solve(args: SolveArgs, solver: Solver) -> Result<i32, CliError> {
    let loaded = load_scenario(&args.scenario)?;
    let result = match solver {
        Solver::Efc => efc_hindcast(&loaded.fx, &loaded.records, loaded.config.tol_mw)?,
        Solver::Elcc => elcc_hindcast(&loaded.fx, &loaded.records, loaded.config.tol_mw)?,
    };
    emit_json(
        &loaded.config.output_path.clone(),
        &SolveOutput {
            config: &loaded.config,
            warnings: &loaded.warnings,
            record_count: loaded.records.len(),
            result: &result,
        },
    )?;
    Ok(if result.flags.is_empty() { 0 } else { 2 })
}

#[derive(Serialize)]
struct GarverOutput<'a> {
    config: &'a ScenarioConfig,
    warnings: &'a [String],
    record_count: usize,
    fit: &'a GarverFit,
    result: &'a CapacityValueResult,
}

fn handle_garver(args: GarverArgs) -> Result<i32, CliError> {
    if args.window_points < 2 {
        return Err(CliError::Input("--window-points must be at least 2".to_string()));
    }
    if !(args.window_min < args.window_max) {
        return Err(CliError::Input(format!(
            "--window-min ({}) must be below --window-max ({})",
            args.window_min, args.window_max
        )));
    }
    let loaded = load_scenario(&args.scenario)?;
    let demands: Vec<f64> = loaded.records.iter().map(|r| r.demand_mw).collect();
    let winds: Vec<f64> = loaded.records.iter().map(|r| r.wind_mw).collect();
    let margin = margin_cdf(&loaded.fx, &demands, CdfMode::Interpolated)?;
    let span = args.window_max - args.window_min;
    let window: Vec<f64> = (0..args.window_points)
        .map(|k| args.window_min + span * k as f64 / (args.window_points - 1) as f64)
        .collect();
    let fit = garver_fit(&margin, &window)?;
    let y_dist = CapacityDistribution::from_samples(loaded.fx.grid_step(), &winds)?;
    let result = garver_efc(&fit, &y_dist)?;
    emit_json(
        &loaded.config.output_path.clone(),
        &GarverOutput {
            config: &loaded.config,
            warnings: &loaded.warnings,
            record_count: loaded.records.len(),
            fit: &fit,
            result: &result,
        },
    )?;
    Ok(0)
}

#[derive(Serialize)]
struct SmallCapOutput<'a> {
    config: &'a ScenarioConfig,
    warnings: &'a [String],
    record_count: usize,
    mu_y_mw: f64,
    var_y_mw2: f64,
    result: &'a CapacityValueResult,
}

fn handle_small_cap(args: SmallCapArgs) -> Result<i32, CliError> {
    let loaded = load_scenario(&args.scenario)?;
    let demands: Vec<f64> = loaded.records.iter().map(|r| r.demand_mw).collect();
    let winds: Vec<f64> = loaded.records.iter().map(|r| r.wind_mw).collect();
    let margin = margin_cdf(&loaded.fx, &demands, CdfMode::Interpolated)?;
    let n = winds.len() as f64;
    let mu = winds.iter().sum::<f64>() / n;
    let var = winds.iter().map(|y| (y - mu) * (y - mu)).sum::<f64>() / n;
    let result = small_capacity_efc(&margin, mu, var)?;
    emit_json(
        &loaded.config.output_path.clone(),
        &SmallCapOutput {
            config: &loaded.config,
            warnings: &loaded.warnings,
            record_count: loaded.records.len(),
            mu_y_mw: mu,
            var_y_mw2: var,
            result: &result,
        },
    )?;
    Ok(0)
}

#[derive(Clone, Copy)]
enum StatKind {
    Lole,
    Efc,
    Elcc,
}

#[derive(Serialize)]
struct BootstrapOutput<'a> {
    config: &'a ScenarioConfig,
    warnings: &'a [String],
    record_count: usize,
    resample_mode: ResampleMode,
    refilter_top_n: bool,
    values_csv: Option<String>,
    summary: &'a BootstrapSummary,
}

fn handle_bootstrap(args: BootstrapArgs) -> Result<i32, CliError> {
    let kind = match args.statistic.as_str() {
        "lole" => StatKind::Lole,
        "efc" => StatKind::Efc,
        "elcc" => StatKind::Elcc,
        other => {
            return Err(CliError::Input(format!(
                "unknown statistic `{other}` (expected lole, efc, or elcc)"
            )))
        }
    };
    let config = resolve_config(&args.scenario)?;
    let mut warnings = Vec::new();
    let fx = load_fx(&config)?;
    let refilter = args.refilter_top_n && config.top_n.is_some();
    let records = load_records(&config, !refilter, &mut warnings)?;

    let mode = config.cdf_mode;
    let tol = config.tol_mw;
    let top_n = config.top_n;
    let statistic = |sample: &[DemandWindRecord]| -> Result<f64, String> {
        let filtered;
        let data: &[DemandWindRecord] = if refilter {
            filtered = top_n_by_demand(sample, top_n.unwrap())
                .map_err(|e| e.to_string())?
                .0;
            &filtered
        } else {
            sample
        };
        match kind {
            StatKind::Lole => lole(&fx, data, mode).map(|r| r.lole).map_err(|e| e.to_string()),
            StatKind::Efc => {
                efc_hindcast(&fx, data, tol).map(|r| r.value).map_err(|e| e.to_string())
            }
            StatKind::Elcc => {
                elcc_hindcast(&fx, data, tol).map(|r| r.value).map_err(|e| e.to_string())
            }
        }
    };
    let bootstrap_config = BootstrapConfig {
        replicates: config.replicates,
        seed: config.seed,
        ci_level: config.ci_level,
        resample_mode: if args.independent_marginals {
            ResampleMode::IndependentMarginals
        } else {
            ResampleMode::Paired
        },
    };
    let summary = bootstrap_statistic(&records, &args.statistic, statistic, &bootstrap_config)?;

    let values_csv = match &args.values_out {
        Some(path) => {
            let mut csv = String::from("replicate,value\n");
            for (i, v) in summary.values.iter().enumerate() {
                csv.push_str(&format!("{i},{v}\n"));
            }
            write_text(path, &csv)?;
            Some(path.display().to_string())
        }
        None => None,
    };
    emit_json(
        &config.output_path.clone(),
        &BootstrapOutput {
            config: &config,
            warnings: &warnings,
            record_count: records.len(),
            resample_mode: bootstrap_config.resample_mode,
            refilter_top_n: refilter,
            values_csv,
            summary: &summary,
        },
    )?;
    Ok(0)
}

#[derive(Serialize)]
struct SynthCoptJson<'a> {
    grid_step_mw: f64,
    support_mw: &'a [f64],
    pmf: &'a [f64],
    mean_mw: f64,
    tail_lambda_per_mw: f64,
    tail_scale: f64,
    tail_window_mw: (f64, f64),
    seed: u64,
}

#[derive(Serialize)]
struct SynthOutput<'a> {
    lambda_per_mw: f64,
    tail_scale: f64,
    grid_step_mw: f64,
    record_count: usize,
    seed: u64,
    demand_base_mw: f64,
    demand_spread_steps: u32,
    tail_headroom_mw: f64,
    tail_window_mw: (f64, f64),
    records_out: &'a str,
    copt_out: &'a str,
}

fn parse_y_pmf(text: &str) -> Result<Vec<(f64, f64)>, CliError> {
    text.split(',')
        .map(|pair| {
            let (mw, prob) = pair.split_once(':').ok_or_else(|| {
                CliError::Input(format!("--y-pmf entry `{pair}` must look like `mw:prob`"))
            })?;
            let mw: f64 = mw
                .trim()
                .parse()
                .map_err(|_| CliError::Input(format!("--y-pmf: bad MW value `{mw}`")))?;
            let prob: f64 = prob
                .trim()
                .parse()
                .map_err(|_| CliError::Input(format!("--y-pmf: bad probability `{prob}`")))?;
            Ok((mw, prob))
        })
        .collect()
}

fn handle_synth(args: SynthArgs) -> Result<i32, CliError> {
    let spec = SyntheticSpec {
        lambda_per_mw: args.lambda,
        tail_scale: args.tail_scale,
        grid_step: args.grid_step,
        record_count: args.count,
        seed: args.seed,
        y_pmf: parse_y_pmf(&args.y_pmf)?,
        demand_base_mw: args.demand_base,
        demand_spread_steps: args.demand_spread_steps,
        tail_headroom_mw: args.tail_headroom,
    };
    let data = generate_synthetic(&spec)?;
    ingest::write_records_csv(&args.records_out, &data.records)?;
    let copt_json = serde_json::to_string_pretty(&SynthCoptJson {
        grid_step_mw: data.copt.grid_step(),
        support_mw: data.copt.support(),
        pmf: data.copt.pmf(),
        mean_mw: data.copt.mean(),
        tail_lambda_per_mw: spec.lambda_per_mw,
        tail_scale: spec.tail_scale,
        tail_window_mw: data.tail_window_mw,
        seed: spec.seed,
    })
    .map_err(|e| CliError::Input(e.to_string()))?;
    write_text(&args.copt_out, &(copt_json + "\n"))?;
    let out = args.out.as_ref().map(|p| p.display().to_string());
    emit_json(
        &out,
        &SynthOutput {
            lambda_per_mw: spec.lambda_per_mw,
            tail_scale: spec.tail_scale,
            grid_step_mw: spec.grid_step,
            record_count: spec.record_count,
            seed: spec.seed,
            demand_base_mw: spec.demand_base_mw,
            demand_spread_steps: spec.demand_spread_steps,
            tail_headroom_mw: spec.tail_headroom_mw,
            tail_window_mw: data.tail_window_mw,
            records_out: &args.records_out.display().to_string(),
            copt_out: &args.copt_out.display().to_string(),
        },
    )?;
    Ok(0)
}
