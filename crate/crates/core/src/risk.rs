//! Margin distributions and loss-of-load risk metrics.
//!
//! The margin is available capacity minus demand, M = X − D; a period is
//! short when M ≤ 0, so its loss-of-load probability is F_X(d − y) and the
//! loss-of-load expectation is the sum of those probabilities over records.

use chrono::NaiveDateTime;
use serde::Serialize;
use thiserror::Error;

use crate::copt::{CapacityDistribution, CdfMode};

#[derive(Debug, Error, PartialEq)]
pub enum RiskError {
    #[error("record list is empty")]
    EmptyRecords,
    #[error("demand list is empty")]
    EmptyDemands,
    #[error("record at {0}: demand {1} must be finite and non-negative")]
    InvalidDemand(NaiveDateTime, f64),
    #[error("record at {0}: wind {1} must be finite and non-negative")]
    InvalidWind(NaiveDateTime, f64),
    #[error("exponential tail requires rate > 0 and scale in (0, 1], got rate {rate}, scale {scale}")]
    InvalidTailParams { rate: f64, scale: f64 },
    #[error("density step must be positive, got {0}")]
    InvalidDensityStep(f64),
    #[error("total LOLE is zero; contribution shares are undefined")]
    ZeroLole,
}

/// One observed (demand, wind) pair for a single period.
#[derive(Debug, Clone, PartialEq)]
pub struct DemandWindRecord {
    pub timestamp: NaiveDateTime,
    pub demand_mw: f64,
    pub wind_mw: f64,
}

impl DemandWindRecord {
    pub fn new(timestamp: NaiveDateTime, demand_mw: f64, wind_mw: f64) -> Result<Self, RiskError> {
        if !demand_mw.is_finite() || demand_mw < 0.0 {
            return Err(RiskError::InvalidDemand(timestamp, demand_mw));
        }
        if !wind_mw.is_finite() || wind_mw < 0.0 {
            return Err(RiskError::InvalidWind(timestamp, wind_mw));
        }
        Ok(Self { timestamp, demand_mw, wind_mw })
    }

    pub fn net_demand_mw(&self) -> f64 {
        self.demand_mw - self.wind_mw
    }
}

/// Where a margin model came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MarginProvenance {
    Analytic,
    Empirical,
}

enum MarginKind {
    /// F_M(m) = mean over demands of F_X(d + m).
    Empirical { fx: CapacityDistribution, demands: Vec<f64>, mode: CdfMode },
    /// F_M(m) = min(scale · exp(rate · m), 1).
    ExponentialTail { rate: f64, scale: f64 },
}

/// Evaluable CDF of the margin M = X − D, with density and density-slope
/// estimates by centered finite differences.
pub struct MarginModel {
    kind: MarginKind,
    density_step: f64,
}

impl MarginModel {
    /// Analytic margin with an exponential lower tail, clamped at one.
    pub fn exponential_tail(rate: f64, scale: f64) -> Result<Self, RiskError> {
        if !(rate > 0.0) || !(scale > 0.0) || scale > 1.0 {
            return Err(RiskError::InvalidTailParams { rate, scale });
        }
        Ok(Self { kind: MarginKind::ExponentialTail { rate, scale }, density_step: 1.0 })
    }

    /// Overrides the finite-difference bandwidth used by [`Self::density`]
    /// and [`Self::density_slope`]. Defaults: 2 × grid step for empirical
    /// margins, 1 MW for analytic ones.
    pub fn with_density_step(mut self, h: f64) -> Result<Self, RiskError> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(RiskError::InvalidDensityStep(h));
        }
        self.density_step = h;
        Ok(self)
    }

    pub fn provenance(&self) -> MarginProvenance {
        match self.kind {
            MarginKind::Empirical { .. } => MarginProvenance::Empirical,
            MarginKind::ExponentialTail { .. } => MarginProvenance::Analytic,
        }
    }

    pub fn density_step(&self) -> f64 {
        self.density_step
    }

    /// F_M(m) = Pr(M <= m).
    pub fn cdf(&self, m: f64) -> f64 {
        match &self.kind {
            MarginKind::Empirical { fx, demands, mode } => {
                let sum: f64 = demands.iter().map(|&d| fx.cdf(d + m, *mode)).sum();
                sum / demands.len() as f64
            }
            MarginKind::ExponentialTail { rate, scale } => (scale * (rate * m).exp()).min(1.0),
        }
    }

    /// f_M(m) by the centered difference [F(m+h) − F(m−h)] / 2h.
    pub fn density(&self, m: f64) -> f64 {
        let h = self.density_step;
        (self.cdf(m + h) - self.cdf(m - h)) / (2.0 * h)
    }

    /// f_M′(m) by the second difference [F(m+h) − 2F(m) + F(m−h)] / h².
    pub fn density_slope(&self, m: f64) -> f64 {
        let h = self.density_step;
        (self.cdf(m + h) - 2.0 * self.cdf(m) + self.cdf(m - h)) / (h * h)
    }
}

/// Empirical margin model from a capacity distribution and a demand series:
/// F_M(m) is the mean of F_X(d + m) over the demands, read in `mode`.
pub fn margin_cdf(
    fx: &CapacityDistribution,
    demands: &[f64],
    mode: CdfMode,
) -> Result<MarginModel, RiskError> {
    if demands.is_empty() {
        return Err(RiskError::EmptyDemands);
    }
    Ok(MarginModel {
        density_step: 2.0 * fx.grid_step(),
        kind: MarginKind::Empirical { fx: fx.clone(), demands: demands.to_vec(), mode },
    })
}

/// Loss-of-load probability for a single period: F_X(demand − wind).
pub fn lolp_snapshot(fx: &CapacityDistribution, demand_mw: f64, wind_mw: f64, mode: CdfMode) -> f64 {
    fx.cdf(demand_mw - wind_mw, mode)
}

/// Period LOLE with its per-record breakdown.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RiskResult {
    /// Expected count of shortfall periods over the dataset span.
    pub lole: f64,
    /// LOLP of each record, in input order.
    pub per_record_lolp: Vec<f64>,
    pub max_lolp: f64,
}

/// Sums per-record loss-of-load probabilities over the dataset.
pub fn lole(
    fx: &CapacityDistribution,
    records: &[DemandWindRecord],
    mode: CdfMode,
) -> Result<RiskResult, RiskError> {
    if records.is_empty() {
        return Err(RiskError::EmptyRecords);
    }
    let per_record_lolp: Vec<f64> = records
        .iter()
        .map(|r| lolp_snapshot(fx, r.demand_mw, r.wind_mw, mode))
        .collect();
    let lole = per_record_lolp.iter().sum();
    let max_lolp = per_record_lolp.iter().fold(0.0f64, |a, &b| a.max(b));
    Ok(RiskResult { lole, per_record_lolp, max_lolp })
}

/// One point on the ranked contribution curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContributionEntry {
    /// 1-based rank by decreasing net demand.
    pub rank: usize,
    pub timestamp: NaiveDateTime,
    pub net_demand_mw: f64,
    pub lolp: f64,
    /// Share of total LOLE carried by the top `rank` records.
    pub cumulative_share: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContributionCurve {
    pub total_lole: f64,
    pub entries: Vec<ContributionEntry>,
}

/// Ranks records by decreasing net demand (ties broken by ascending
/// timestamp) and reports the cumulative share of LOLE carried by the top
/// n records; the final share is exactly one.
pub fn lole_contributions(
    fx: &CapacityDistribution,
    records: &[DemandWindRecord],
    mode: CdfMode,
) -> Result<ContributionCurve, RiskError> {
    if records.is_empty() {
        return Err(RiskError::EmptyRecords);
    }
    let mut order: Vec<usize> = (0..records.len()).collect();
    order.sort_by(|&i, &j| {
        records[j]
            .net_demand_mw()
            .total_cmp(&records[i].net_demand_mw())
            .then(records[i].timestamp.cmp(&records[j].timestamp))
    });
    let lolps: Vec<f64> = order
        .iter()
        .map(|&i| lolp_snapshot(fx, records[i].demand_mw, records[i].wind_mw, mode))
        .collect();
    let total: f64 = lolps.iter().sum();
    if total <= 0.0 {
        return Err(RiskError::ZeroLole);
    }
    let mut running = 0.0;
    let entries = order
        .iter()
        .zip(&lolps)
        .enumerate()
        .map(|(k, (&i, &lolp))| {
            running += lolp;
            ContributionEntry {
                rank: k + 1,
                timestamp: records[i].timestamp,
                net_demand_mw: records[i].net_demand_mw(),
                lolp,
                cumulative_share: running / total,
            }
        })
        .collect();
    Ok(ContributionCurve { total_lole: total, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::copt::{build_copt, GeneratingUnit};
    use chrono::NaiveDate;

    fn ts(hour: u32) -> NaiveDateTime {
        NaiveDate::from_ymd_opt(2006, 2, 12).unwrap().and_hms_opt(hour, 0, 0).unwrap()
    }

    fn rec(hour: u32, demand: f64, wind: f64) -> DemandWindRecord {
        DemandWindRecord::new(ts(hour), demand, wind).unwrap()
    }

    fn two_unit_copt() -> CapacityDistribution {
        let units = [
            GeneratingUnit::new("a", 100.0, 0.9).unwrap(),
            GeneratingUnit::new("b", 100.0, 0.9).unwrap(),
        ];
        build_copt(&units, 1.0).unwrap()
    }

    #[test]
    fn margin_cdf_hand_example_step_mode() {
        let fx = two_unit_copt();
        let m = margin_cdf(&fx, &[150.0, 250.0], CdfMode::Step).unwrap();
        assert!((m.cdf(0.0) - 0.595).abs() < 1e-12);
    }

    #[test]
    fn margin_cdf_single_demand_reduces_to_fx() {
        let fx = two_unit_copt();
        let m = margin_cdf(&fx, &[150.0], CdfMode::Interpolated).unwrap();
        for probe in [-200.0, -50.0, 0.0, 30.0, 100.0] {
            assert_eq!(m.cdf(probe), fx.cdf(150.0 + probe, CdfMode::Interpolated));
        }
    }

    #[test]
    fn margin_cdf_upper_clamp() {
        let fx = two_unit_copt();
        let m = margin_cdf(&fx, &[150.0, 250.0], CdfMode::Interpolated).unwrap();
        assert_eq!(m.cdf(1000.0), 1.0);
    }

    #[test]
    fn margin_cdf_rejects_empty_demands() {
        let fx = two_unit_copt();
        assert!(matches!(margin_cdf(&fx, &[], CdfMode::Step), Err(RiskError::EmptyDemands)));
    }

    #[test]
    fn degenerate_point_mass_margin_counts_demands() {
        // With X fixed at x0, step-mode F_M(m) is the fraction of demands
        // at or above x0 - m.
        let fx = CapacityDistribution::point_mass(1.0, 100.0).unwrap();
        let demands = [80.0, 95.0, 100.0, 110.0, 130.0];
        let m = margin_cdf(&fx, &demands, CdfMode::Step).unwrap();
        for probe in [-25.0, -10.0, 0.0, 5.0, 40.0] {
            let frac = demands.iter().filter(|&&d| d >= 100.0 - probe).count() as f64
                / demands.len() as f64;
            assert_eq!(m.cdf(probe), frac);
        }
    }

    #[test]
    fn exponential_tail_density_ratio() {
        let m = MarginModel::exponential_tail(0.01, 0.5).unwrap();
        let ratio = m.density_slope(0.0) / (2.0 * m.density(0.0));
        assert!((ratio - 0.005).abs() < 1e-7);
    }

    #[test]
    fn exponential_tail_rejects_bad_params() {
        assert!(MarginModel::exponential_tail(0.0, 0.5).is_err());
        assert!(MarginModel::exponential_tail(0.01, 0.0).is_err());
        assert!(MarginModel::exponential_tail(0.01, 1.5).is_err());
    }

    #[test]
    fn lolp_snapshot_hand_values() {
        let fx = two_unit_copt();
        assert!((lolp_snapshot(&fx, 150.0, 0.0, CdfMode::Step) - 0.19).abs() < 1e-12);
        assert!((lolp_snapshot(&fx, 150.0, 50.0, CdfMode::Step) - 0.19).abs() < 1e-12);
        assert!((lolp_snapshot(&fx, 150.0, 100.0, CdfMode::Step) - 0.01).abs() < 1e-12);
        assert_eq!(lolp_snapshot(&fx, 150.0, 400.0, CdfMode::Step), 0.0);
    }

    #[test]
    fn lole_hand_example() {
        let fx = two_unit_copt();
        let records = [rec(17, 150.0, 50.0), rec(18, 150.0, 100.0)];
        let r = lole(&fx, &records, CdfMode::Step).unwrap();
        assert!((r.lole - 0.20).abs() < 1e-12);
        assert!((r.max_lolp - 0.19).abs() < 1e-12);
        assert_eq!(r.per_record_lolp.len(), 2);
        let sum: f64 = r.per_record_lolp.iter().sum();
        assert_eq!(sum, r.lole);
    }

    #[test]
    fn lole_zero_when_wind_covers_everything() {
        let fx = two_unit_copt();
        let records = [rec(0, 150.0, 400.0), rec(1, 100.0, 500.0)];
        let r = lole(&fx, &records, CdfMode::Step).unwrap();
        assert_eq!(r.lole, 0.0);
    }

    #[test]
    fn duplicate_record_doubles_contribution() {
        let fx = two_unit_copt();
        let single = [rec(0, 150.0, 50.0)];
        let double = [rec(0, 150.0, 50.0), rec(1, 150.0, 50.0)];
        let a = lole(&fx, &single, CdfMode::Step).unwrap();
        let b = lole(&fx, &double, CdfMode::Step).unwrap();
        assert_eq!(b.lole, 2.0 * a.lole);
    }

    #[test]
    fn lole_rejects_empty_records() {
        let fx = two_unit_copt();
        assert!(matches!(lole(&fx, &[], CdfMode::Step), Err(RiskError::EmptyRecords)));
    }

    #[test]
    fn contributions_hand_example() {
        let fx = two_unit_copt();
        let records = [rec(17, 150.0, 50.0), rec(18, 150.0, 100.0)];
        let c = lole_contributions(&fx, &records, CdfMode::Step).unwrap();
        assert!((c.entries[0].cumulative_share - 0.95).abs() < 1e-12);
        assert_eq!(c.entries[1].cumulative_share, 1.0);
        assert_eq!(c.entries[0].net_demand_mw, 100.0);
        assert_eq!(c.entries[0].rank, 1);
    }

    #[test]
    fn contributions_single_record() {
        let fx = two_unit_copt();
        let c = lole_contributions(&fx, &[rec(0, 150.0, 0.0)], CdfMode::Step).unwrap();
        assert_eq!(c.entries.len(), 1);
        assert_eq!(c.entries[0].cumulative_share, 1.0);
    }

    #[test]
    fn contributions_identical_records_are_linear() {
        let fx = two_unit_copt();
        let records: Vec<DemandWindRecord> = (0..5).map(|h| rec(h, 150.0, 50.0)).collect();
        let c = lole_contributions(&fx, &records, CdfMode::Step).unwrap();
        for (k, e) in c.entries.iter().enumerate() {
            assert!((e.cumulative_share - (k + 1) as f64 / 5.0).abs() < 1e-12);
        }
        // ties resolved by ascending timestamp
        for w in c.entries.windows(2) {
            assert!(w[0].timestamp < w[1].timestamp);
        }
    }

    #[test]
    fn contributions_error_on_zero_lole() {
        let fx = two_unit_copt();
        let records = [rec(0, 10.0, 400.0)];
        assert!(matches!(
            lole_contributions(&fx, &records, CdfMode::Step),
            Err(RiskError::ZeroLole)
        ));
    }

    #[test]
    fn record_validation() {
        assert!(DemandWindRecord::new(ts(0), -1.0, 0.0).is_err());
        assert!(DemandWindRecord::new(ts(0), 1.0, f64::NAN).is_err());
    }
}
