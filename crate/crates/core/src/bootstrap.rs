//! Bootstrap resampling of demand-wind records: i.i.d. resamples with
//! replacement, deterministic per-replicate RNG substreams, and percentile
//! confidence intervals for any scalar statistic.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::risk::DemandWindRecord;

/// Recorded in every summary: the resampling model treats records as
/// exchangeable, so serial correlation in the source data is not captured.
pub const IID_CAVEAT: &str = "interval assumes independent, identically distributed records; \
serial correlation in the source series makes it an underestimate of uncertainty";

#[derive(Debug, Error, PartialEq)]
pub enum BootstrapError {
    #[error("record list is empty")]
    EmptyRecords,
    #[error("value list is empty")]
    EmptyValues,
    #[error("confidence level must be in (0, 1), got {0}")]
    InvalidCiLevel(f64),
    #[error("replicate count must be at least 1")]
    ZeroReplicates,
    #[error("statistic failed on the original records: {0}")]
    PointEstimateFailed(String),
    #[error("statistic failed on replicate {replicate}: {message}")]
    StatisticFailed { replicate: usize, message: String },
    #[error("statistic returned a non-finite value on replicate {replicate}")]
    NonFiniteStatistic { replicate: usize },
}

/// How each replicate is drawn from the records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ResampleMode {
    /// Resample (demand, wind) pairs together, preserving their joint
    /// empirical distribution.
    Paired,
    /// Resample the demand and wind coordinates with independent
    /// substreams, imposing independence between them.
    IndependentMarginals,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BootstrapConfig {
    pub replicates: usize,
    pub seed: u64,
    pub ci_level: f64,
    pub resample_mode: ResampleMode,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self { replicates: 200, seed: 0, ci_level: 0.95, resample_mode: ResampleMode::Paired }
    }
}

/// Replicate statistics with percentile interval bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BootstrapSummary {
    pub statistic: String,
    pub point_estimate: f64,
    pub replicates: usize,
    pub seed: u64,
    pub ci_level: f64,
    /// (lower, upper) percentile interval of the replicate values.
    pub ci: (f64, f64),
    /// upper / lower, when the lower bound is positive.
    pub ci_ratio: Option<f64>,
    /// One statistic value per replicate, in replicate order.
    pub values: Vec<f64>,
    pub caveat: String,
}

/// Deterministic RNG substream for one replicate: all replicates share the
/// seed and differ only in the stream index, so parallel and sequential
/// execution produce identical draws.
pub fn replicate_rng(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One resample with replacement, same length as the input, preserving the
/// (demand, wind) pairing of each drawn record.
pub fn resample(
    records: &[DemandWindRecord],
    rng: &mut ChaCha12Rng,
) -> Result<Vec<DemandWindRecord>, BootstrapError> {
    if records.is_empty() {
        return Err(BootstrapError::EmptyRecords);
    }
    let n = records.len();
    Ok((0..n).map(|_| records[rng.random_range(0..n)].clone()).collect())
}

/// Resample demand and wind independently of each other, breaking the joint
/// pairing; timestamps follow the demand draw.
pub fn resample_independent(
    records: &[DemandWindRecord],
    demand_rng: &mut ChaCha12Rng,
    wind_rng: &mut ChaCha12Rng,
) -> Result<Vec<DemandWindRecord>, BootstrapError> {
    if records.is_empty() {
        return Err(BootstrapError::EmptyRecords);
    }
    let n = records.len();
    Ok((0..n)
        .map(|_| {
            let d = &records[demand_rng.random_range(0..n)];
            let w = &records[wind_rng.random_range(0..n)];
            DemandWindRecord { timestamp: d.timestamp, demand_mw: d.demand_mw, wind_mw: w.wind_mw }
        })
        .collect())
}

/// Quantile by linear interpolation at the 1-based index 1 + p(n-1) over
/// the sorted values.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let h = p * (n - 1) as f64;
    let i = h.floor() as usize;
    if i + 1 >= n {
        return sorted[n - 1];
    }
    sorted[i] + (h - i as f64) * (sorted[i + 1] - sorted[i])
}

/// Equal-tailed percentile interval at the given confidence level.
pub fn percentile_ci(values: &[f64], level: f64) -> Result<(f64, f64), BootstrapError> {
    if values.is_empty() {
        return Err(BootstrapError::EmptyValues);
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(BootstrapError::InvalidCiLevel(level));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let alpha = (1.0 - level) / 2.0;
    Ok((quantile(&sorted, alpha), quantile(&sorted, 1.0 - alpha)))
}

/// Runs `config.replicates` independent resamples of the records, applies
/// the statistic to each, and summarizes the replicate distribution with a
/// percentile interval.
///
/// Replicate i draws from substream(s) derived from (seed, i), so the
/// summary is identical regardless of how the replicates are scheduled
/// across threads.
pub fn bootstrap_statistic<F, E>(
    records: &[DemandWindRecord],
    statistic_name: &str,
    statistic: F,
    config: &BootstrapConfig,
) -> Result<BootstrapSummary, BootstrapError>
where
    F: Fn(&[DemandWindRecord]) -> Result<f64, E> + Sync,
    E: std::fmt::Display,
{
    if records.is_empty() {
        return Err(BootstrapError::EmptyRecords);
    }
    if config.replicates == 0 {
        return Err(BootstrapError::ZeroReplicates);
    }
    if !(config.ci_level > 0.0 && config.ci_level < 1.0) {
        return Err(BootstrapError::InvalidCiLevel(config.ci_level));
    }
    let point_estimate = statistic(records)
        .map_err(|e| BootstrapError::PointEstimateFailed(e.to_string()))?;

    let outcomes: Vec<Result<f64, BootstrapError>> = (0..config.replicates)
        .into_par_iter()
        .map(|i| {
            let sample = match config.resample_mode {
                ResampleMode::Paired => {
                    let mut rng = replicate_rng(config.seed, i as u64);
                    resample(records, &mut rng)?
                }
                ResampleMode::IndependentMarginals => {
                    let mut d_rng = replicate_rng(config.seed, 2 * i as u64);
                    let mut w_rng = replicate_rng(config.seed, 2 * i as u64 + 1);
                    resample_independent(records, &mut d_rng, &mut w_rng)?
                }
            };
            let value = statistic(&sample).map_err(|e| BootstrapError::StatisticFailed {
                replicate: i,
                message: e.to_string(),
            })?;
            if !value.is_finite() {
                return Err(BootstrapError::NonFiniteStatistic { replicate: i });
            }
            Ok(value)
        })
        .collect();

    let mut values = Vec::with_capacity(config.replicates);
    for outcome in outcomes {
        values.push(outcome?);
    }

    let ci = percentile_ci(&values, config.ci_level)?;
    let ci_ratio = if ci.0 > 0.0 { Some(ci.1 / ci.0) } else { None };
    Ok(BootstrapSummary {
        statistic: statistic_name.to_string(),
        point_estimate,
        replicates: config.replicates,
        seed: config.seed,
        ci_level: config.ci_level,
        ci,
        ci_ratio,
        values,
        caveat: IID_CAVEAT.to_string(),
    })
}
