//! Record-set transforms: critical-period filtering and rescaling.

use thiserror::Error;

use adequacy_core::risk::DemandWindRecord;

#[derive(Debug, Error, PartialEq)]
pub enum TransformError {
    #[error("top-n must be at least 1")]
    ZeroTopN,
    #[error("wind scale must be non-negative and finite, got {0}")]
    InvalidWindScale(f64),
    #[error("demand scale must be positive and finite, got {0}")]
    InvalidDemandScale(f64),
}

/// Keeps the `n` records with the highest demand (ties broken by earlier
/// timestamp), preserving the original chronological order of the output.
///
/// When `n` exceeds the record count, all records are returned and the
/// second element of the pair is true so callers can surface a warning.
pub fn top_n_by_demand(
    records: &[DemandWindRecord],
    n: usize,
) -> Result<(Vec<DemandWindRecord>, bool), TransformError> {
    if n == 0 {
        return Err(TransformError::ZeroTopN);
    }
    if n >= records.len() {
        return Ok((records.to_vec(), n > records.len()));
    }
    let mut order: Vec<usize> = (0..records.len()).collect();
    order.sort_by(|&i, &j| {
        records[j]
            .demand_mw
            .total_cmp(&records[i].demand_mw)
            .then(records[i].timestamp.cmp(&records[j].timestamp))
    });
    let mut keep: Vec<usize> = order[..n].to_vec();
    keep.sort_unstable();
    Ok((keep.into_iter().map(|i| records[i].clone()).collect(), false))
}

/// Scales every record to (demand * demand_scale, wind * wind_scale),
/// leaving timestamps untouched.
pub fn rescale(
    records: &[DemandWindRecord],
    wind_scale: f64,
    demand_scale: f64,
) -> Result<Vec<DemandWindRecord>, TransformError> {
    if !wind_scale.is_finite() || wind_scale < 0.0 {
        return Err(TransformError::InvalidWindScale(wind_scale));
    }
    if !demand_scale.is_finite() || demand_scale <= 0.0 {
        return Err(TransformError::InvalidDemandScale(demand_scale));
    }
    Ok(records
        .iter()
        .map(|r| DemandWindRecord {
            timestamp: r.timestamp,
            demand_mw: r.demand_mw * demand_scale,
            wind_mw: r.wind_mw * wind_scale,
        })
        .collect())
}
