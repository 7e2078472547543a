//! Effective run configuration: command-line flags merged over an optional
//! JSON config file, with every effective setting echoed into output JSON.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use adequacy_core::copt::CdfMode;

/// Scenario knobs shared by the analysis subcommands.
#[derive(Debug, Clone, clap::Args)]
pub struct ScenarioArgs {
    /// JSON config file; explicit flags override its settings
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Units CSV (`name,capacity_mw,availability`)
    #[arg(long)]
    pub units: Option<PathBuf>,
    /// Capacity distribution JSON, as written by `copt` or `synth`
    #[arg(long)]
    pub copt: Option<PathBuf>,
    /// Records CSV (`timestamp,demand_mw,wind_mw`)
    #[arg(long)]
    pub records: Option<PathBuf>,
    /// MW granularity of the capacity table (required with --units)
    #[arg(long)]
    pub grid_step: Option<f64>,
    /// Keep only the n highest-demand records
    #[arg(long)]
    pub top_n: Option<usize>,
    /// Multiply every wind value by this factor
    #[arg(long)]
    pub wind_scale: Option<f64>,
    /// Multiply every demand value by this factor
    #[arg(long)]
    pub demand_scale: Option<f64>,
    /// CDF mode for risk reports: step | interpolated
    #[arg(long)]
    pub mode: Option<String>,
    /// Solver tolerance in MW
    #[arg(long)]
    pub tol: Option<f64>,
    /// Bootstrap replicate count
    #[arg(long)]
    pub replicates: Option<usize>,
    /// RNG seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Bootstrap confidence level
    #[arg(long)]
    pub ci_level: Option<f64>,
    /// Collapse half-hourly records to hours, keeping the higher-demand half
    #[arg(long)]
    pub aggregate_hours: bool,
    /// Output JSON path (stdout when omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Optional JSON config file mirroring the flags. Unknown keys are errors.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub units: Option<String>,
    pub copt: Option<String>,
    pub records: Option<String>,
    pub grid_step: Option<f64>,
    pub top_n: Option<usize>,
    pub wind_scale: Option<f64>,
    pub demand_scale: Option<f64>,
    pub mode: Option<String>,
    pub tol: Option<f64>,
    pub replicates: Option<usize>,
    pub seed: Option<u64>,
    pub ci_level: Option<f64>,
    pub aggregate_hours: Option<bool>,
    pub out: Option<String>,
}

/// Fully resolved settings, echoed verbatim into every output JSON.
#[derive(Debug, Clone, Serialize)]
pub struct ScenarioConfig {
    pub units_path: Option<String>,
    pub copt_path: Option<String>,
    pub records_path: Option<String>,
    pub grid_step_mw: Option<f64>,
    pub top_n: Option<usize>,
    pub wind_scale: f64,
    pub demand_scale: f64,
    pub cdf_mode: CdfMode,
    pub tol_mw: f64,
    pub replicates: usize,
    pub seed: u64,
    pub ci_level: f64,
    pub aggregate_hours: bool,
    pub output_path: Option<String>,
}

pub fn load_file_config(path: &Path) -> Result<FileConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

impl ScenarioConfig {
    /// Flags take precedence over the config file; remaining gaps get the
    /// built-in defaults.
    pub fn resolve(args: &ScenarioArgs, file: &FileConfig) -> Result<Self, String> {
        let path_string = |p: &PathBuf| p.display().to_string();
        let mode_text = args
            .mode
            .clone()
            .or_else(|| file.mode.clone())
            .unwrap_or_else(|| "step".to_string());
        let cdf_mode: CdfMode = mode_text.parse()?;
        let config = Self {
            units_path: args.units.as_ref().map(path_string).or_else(|| file.units.clone()),
            copt_path: args.copt.as_ref().map(path_string).or_else(|| file.copt.clone()),
            records_path: args.records.as_ref().map(path_string).or_else(|| file.records.clone()),
            grid_step_mw: args.grid_step.or(file.grid_step),
            top_n: args.top_n.or(file.top_n),
            wind_scale: args.wind_scale.or(file.wind_scale).unwrap_or(1.0),
            demand_scale: args.demand_scale.or(file.demand_scale).unwrap_or(1.0),
            cdf_mode,
            tol_mw: args.tol.or(file.tol).unwrap_or(0.01),
            replicates: args.replicates.or(file.replicates).unwrap_or(200),
            seed: args.seed.or(file.seed).unwrap_or(0),
            ci_level: args.ci_level.or(file.ci_level).unwrap_or(0.95),
            aggregate_hours: args.aggregate_hours || file.aggregate_hours.unwrap_or(false),
            output_path: args.out.as_ref().map(path_string).or_else(|| file.out.clone()),
        };
        if let Some(step) = config.grid_step_mw {
            if !(step > 0.0) || !step.is_finite() {
                return Err(format!("grid step must be positive, got {step}"));
            }
        }
        if !(config.tol_mw > 0.0) || !config.tol_mw.is_finite() {
            return Err(format!("tolerance must be positive, got {}", config.tol_mw));
        }
        if !(config.ci_level > 0.0 && config.ci_level < 1.0) {
            return Err(format!("confidence level must be in (0, 1), got {}", config.ci_level));
        }
        if config.replicates == 0 {
            return Err("replicate count must be at least 1".to_string());
        }
        Ok(config)
    }
}
