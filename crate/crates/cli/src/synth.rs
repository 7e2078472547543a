//! Synthetic dataset generation: a capacity distribution engineered so the
//! empirical margin against the generated demand series has an exponential
//! lower tail of known rate, paired with a wind series drawn from a given
//! pmf. Fully deterministic under the seed.

use chrono::NaiveDate;
use rand::Rng;
use thiserror::Error;

use adequacy_core::bootstrap::replicate_rng;
use adequacy_core::copt::{CapacityDistribution, CoptError};
use adequacy_core::risk::DemandWindRecord;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("tail rate must be positive and finite, got {0}")]
    InvalidRate(f64),
    #[error("tail scale must be in (0, 1], got {0}")]
    InvalidScale(f64),
    #[error("grid step must be positive, got {0}")]
    InvalidGridStep(f64),
    #[error("record count must be at least 1")]
    ZeroRecords,
    #[error("demand base must be non-negative and finite, got {0}")]
    InvalidDemandBase(f64),
    #[error("tail headroom must be non-negative and finite, got {0}")]
    InvalidHeadroom(f64),
    #[error("wind pmf is invalid: {0}")]
    BadWindPmf(#[from] CoptError),
    #[error("wind pmf support must be non-negative (min {0} MW)")]
    NegativeWind(f64),
    #[error("spec is infeasible: {0}")]
    Infeasible(String),
}

/// Parameters of a synthetic scenario.
#[derive(Debug, Clone)]
pub struct SyntheticSpec {
    /// Exponential tail rate of the designed margin, per MW.
    pub lambda_per_mw: f64,
    /// Margin CDF value at zero margin (the tail scale c).
    pub tail_scale: f64,
    pub grid_step: f64,
    pub record_count: usize,
    pub seed: u64,
    /// Wind pmf as (MW, probability) pairs on the grid.
    pub y_pmf: Vec<(f64, f64)>,
    /// Demand level around which the series is generated.
    pub demand_base_mw: f64,
    /// Uniform demand jitter, in grid steps above the base.
    pub demand_spread_steps: u32,
    /// How far above the maximum demand the exponential region extends,
    /// in MW; needed when solves evaluate the margin above zero.
    pub tail_headroom_mw: f64,
}

#[derive(Debug, Clone)]
pub struct SyntheticData {
    pub copt: CapacityDistribution,
    pub records: Vec<DemandWindRecord>,
    pub wind_dist: CapacityDistribution,
    /// Margin range (MW) over which the empirical tail is exponential at
    /// grid-aligned points.
    pub tail_window_mw: (f64, f64),
}

pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<SyntheticData, SynthError> {
    if !(spec.lambda_per_mw > 0.0) || !spec.lambda_per_mw.is_finite() {
        return Err(SynthError::InvalidRate(spec.lambda_per_mw));
    }
    if !(spec.tail_scale > 0.0) || spec.tail_scale > 1.0 {
        return Err(SynthError::InvalidScale(spec.tail_scale));
    }
    if !(spec.grid_step > 0.0) || !spec.grid_step.is_finite() {
        return Err(SynthError::InvalidGridStep(spec.grid_step));
    }
    if spec.record_count == 0 {
        return Err(SynthError::ZeroRecords);
    }
    if !spec.demand_base_mw.is_finite() || spec.demand_base_mw < 0.0 {
        return Err(SynthError::InvalidDemandBase(spec.demand_base_mw));
    }
    if !spec.tail_headroom_mw.is_finite() || spec.tail_headroom_mw < 0.0 {
        return Err(SynthError::InvalidHeadroom(spec.tail_headroom_mw));
    }
    let step = spec.grid_step;
    let lambda = spec.lambda_per_mw;
    if lambda * step < 1e-12 {
        return Err(SynthError::Infeasible(
            "tail rate times grid step is too small to resolve".into(),
        ));
    }

    let wind_dist = CapacityDistribution::from_pmf(step, &spec.y_pmf)?;
    if wind_dist.min_support() < 0.0 {
        return Err(SynthError::NegativeWind(wind_dist.min_support()));
    }

    // Demand series: base plus uniform jitter in whole grid steps, so every
    // demand sits on the grid and margin evaluation lands on table nodes.
    let base_mult = (spec.demand_base_mw / step).round() as i64;
    let mut demand_rng = replicate_rng(spec.seed, 0);
    let demand_mults: Vec<i64> = (0..spec.record_count)
        .map(|_| base_mult + demand_rng.random_range(0..=spec.demand_spread_steps) as i64)
        .collect();
    let d_max_mult = *demand_mults.iter().max().unwrap();
    let d_min_mult = *demand_mults.iter().min().unwrap();
    let headroom_steps = (spec.tail_headroom_mw / step).round() as i64;
    let top_mult = d_max_mult + headroom_steps;

    if lambda * (top_mult as f64 * step) > 700.0 {
        return Err(SynthError::Infeasible(
            "tail rate times the capacity range overflows the exponential".into(),
        ));
    }

    // Scale the table so the empirical margin CDF at zero equals the tail
    // scale exactly: F_X(x) = c' exp(lambda x) with
    // c' = c / mean(exp(lambda d_t)).
    let m = lambda * (d_max_mult as f64 * step);
    let s_bar: f64 = demand_mults
        .iter()
        .map(|&d| (lambda * (d as f64 * step) - m).exp())
        .sum::<f64>()
        / spec.record_count as f64;
    let c_prime = spec.tail_scale * (-m).exp() / s_bar;
    if c_prime < 1e-14 {
        return Err(SynthError::Infeasible(
            "tail rate is too steep for this grid and demand level".into(),
        ));
    }
    let cum_top = spec.tail_scale * (lambda * (headroom_steps as f64 * step)).exp() / s_bar;
    if cum_top >= 1.0 {
        return Err(SynthError::Infeasible(format!(
            "tail reaches probability {cum_top:.3} at its top; reduce the tail scale, \
             demand spread, or headroom"
        )));
    }

    let mut points: Vec<(f64, f64)> = Vec::with_capacity(top_mult as usize + 2);
    let mut prev_cum = 0.0;
    for k in 0..=top_mult {
        let x = k as f64 * step;
        let cum = c_prime * (lambda * x).exp();
        points.push((x, cum - prev_cum));
        prev_cum = cum;
    }
    points.push(((top_mult + 1) as f64 * step, 1.0 - prev_cum));
    let copt = CapacityDistribution::from_pmf(step, &points)?;

    // Wind series drawn from the pmf with its own substream.
    let mut wind_rng = replicate_rng(spec.seed, 1);
    let mut cum = Vec::with_capacity(wind_dist.len());
    let mut acc = 0.0;
    for &p in wind_dist.pmf() {
        acc += p;
        cum.push(acc);
    }
    let start = NaiveDate::from_ymd_opt(2001, 1, 1).unwrap().and_hms_opt(0, 0, 0).unwrap();
    let records: Vec<DemandWindRecord> = demand_mults
        .iter()
        .enumerate()
        .map(|(t, &d_mult)| {
            let u: f64 = wind_rng.random();
            let idx = cum.partition_point(|&c| c <= u).min(wind_dist.len() - 1);
            let wind = wind_dist.support()[idx];
            DemandWindRecord::new(
                start + chrono::Duration::hours(t as i64),
                d_mult as f64 * step,
                wind,
            )
            .expect("generated records are non-negative")
        })
        .collect();

    Ok(SyntheticData {
        copt,
        records,
        wind_dist,
        tail_window_mw: (-(d_min_mult as f64 * step), headroom_steps as f64 * step),
    })
}
