//! Capacity outage probability tables: discrete distributions of available
//! capacity on a fixed MW grid, with convolution and CDF evaluation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Probabilities smaller than this are pruned after a convolution and the
/// remaining mass renormalized, bounding table growth.
const PRUNE_FLOOR: f64 = 1e-15;

/// Relative slack when checking that a MW value sits on the grid.
const GRID_TOL: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum CoptError {
    #[error("unit list is empty")]
    EmptyUnits,
    #[error("grid step must be positive, got {0}")]
    NonPositiveGridStep(f64),
    #[error("unit `{name}`: availability {value} outside [0, 1]")]
    InvalidAvailability { name: String, value: f64 },
    #[error("unit `{name}`: capacity {value} must be finite and non-negative")]
    InvalidCapacity { name: String, value: f64 },
    #[error("grid steps differ: {0} vs {1}")]
    GridStepMismatch(f64, f64),
    #[error("value {value} MW is not a multiple of grid step {step}")]
    OffGrid { value: f64, step: f64 },
    #[error("support values must be strictly ascending")]
    UnsortedSupport,
    #[error("probability {0} is negative or not finite")]
    InvalidProbability(f64),
    #[error("probability mass sums to {0}, expected 1")]
    MassNotUnit(f64),
    #[error("distribution has no support points")]
    EmptySupport,
}

/// Two-state generating unit: fully available with probability
/// `availability`, otherwise on outage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratingUnit {
    pub name: String,
    pub capacity_mw: f64,
    pub availability: f64,
}

impl GeneratingUnit {
    pub fn new(name: impl Into<String>, capacity_mw: f64, availability: f64) -> Result<Self, CoptError> {
        let name = name.into();
        if !capacity_mw.is_finite() || capacity_mw < 0.0 {
            return Err(CoptError::InvalidCapacity { name, value: capacity_mw });
        }
        if !availability.is_finite() || !(0.0..=1.0).contains(&availability) {
            return Err(CoptError::InvalidAvailability { name, value: availability });
        }
        Ok(Self { name, capacity_mw, availability })
    }
}

/// How to read a discrete CDF between support points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CdfMode {
    /// Right-continuous step function: Pr(X <= x) exactly.
    Step,
    /// Piecewise-linear through the support points, so the CDF is
    /// invertible for the capacity-value solvers.
    Interpolated,
}

impl std::str::FromStr for CdfMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "step" => Ok(CdfMode::Step),
            "interpolated" => Ok(CdfMode::Interpolated),
            other => Err(format!("unknown CDF mode `{other}` (expected `step` or `interpolated`)")),
        }
    }
}

impl std::fmt::Display for CdfMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CdfMode::Step => write!(f, "step"),
            CdfMode::Interpolated => write!(f, "interpolated"),
        }
    }
}

/// Discrete probability distribution of a capacity (MW) on a fixed grid.
///
/// Support points are integer multiples of `grid_step`, strictly ascending,
/// each carrying positive probability; the pmf sums to one. Immutable after
/// construction, so values can be shared freely across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityDistribution {
    step: f64,
    multiples: Vec<i64>,
    support: Vec<f64>,
    pmf: Vec<f64>,
    cdf: Vec<f64>,
}

fn to_multiple(value: f64, step: f64) -> i64 {
    (value / step).round() as i64
}

impl CapacityDistribution {
    /// Builds a distribution from `(mw, probability)` pairs.
    ///
    /// Support values must be strictly ascending multiples of `grid_step`;
    /// probabilities must be non-negative and sum to one within 1e-9 (the
    /// mass is renormalized so downstream sums hold to machine precision).
    /// Zero-probability entries are dropped: support is the set of points
    /// that actually carry mass.
    pub fn from_pmf(grid_step: f64, points: &[(f64, f64)]) -> Result<Self, CoptError> {
        if !(grid_step > 0.0) || !grid_step.is_finite() {
            return Err(CoptError::NonPositiveGridStep(grid_step));
        }
        let mut multiples = Vec::with_capacity(points.len());
        let mut pmf = Vec::with_capacity(points.len());
        let mut total = 0.0;
        for &(mw, p) in points {
            if !p.is_finite() || p < 0.0 {
                return Err(CoptError::InvalidProbability(p));
            }
            let m = to_multiple(mw, grid_step);
            if (mw - m as f64 * grid_step).abs() > GRID_TOL * grid_step {
                return Err(CoptError::OffGrid { value: mw, step: grid_step });
            }
            if let Some(&last) = multiples.last() {
                if m <= last {
                    return Err(CoptError::UnsortedSupport);
                }
            }
            total += p;
            if p > 0.0 {
                multiples.push(m);
                pmf.push(p);
            }
        }
        if multiples.is_empty() {
            return Err(CoptError::EmptySupport);
        }
        if (total - 1.0).abs() > 1e-9 {
            return Err(CoptError::MassNotUnit(total));
        }
        Ok(Self::from_parts(grid_step, multiples, pmf))
    }

    /// Point mass at `mw` (must be on the grid).
    pub fn point_mass(grid_step: f64, mw: f64) -> Result<Self, CoptError> {
        Self::from_pmf(grid_step, &[(mw, 1.0)])
    }

    /// Empirical distribution of observed values, each rounded half-up to
    /// the nearest grid multiple.
    pub fn from_samples(grid_step: f64, values: &[f64]) -> Result<Self, CoptError> {
        if !(grid_step > 0.0) || !grid_step.is_finite() {
            return Err(CoptError::NonPositiveGridStep(grid_step));
        }
        if values.is_empty() {
            return Err(CoptError::EmptySupport);
        }
        let mut counts = std::collections::BTreeMap::new();
        for &v in values {
            *counts.entry(to_multiple(v, grid_step)).or_insert(0u64) += 1;
        }
        let n = values.len() as f64;
        let (multiples, pmf): (Vec<i64>, Vec<f64>) =
            counts.into_iter().map(|(m, c)| (m, c as f64 / n)).unzip();
        Ok(Self::from_parts(grid_step, multiples, pmf))
    }

    /// Internal constructor: `multiples` ascending, `pmf` positive, mass ~1.
    /// Renormalizes so the pmf sums to one and pins the final CDF value at 1.
    fn from_parts(step: f64, multiples: Vec<i64>, mut pmf: Vec<f64>) -> Self {
        debug_assert!(multiples.windows(2).all(|w| w[0] < w[1]));
        let total: f64 = pmf.iter().sum();
        for p in &mut pmf {
            *p /= total;
        }
        let mut cdf = Vec::with_capacity(pmf.len());
        let mut acc = 0.0;
        for &p in &pmf {
            acc += p;
            cdf.push(acc);
        }
        if let Some(last) = cdf.last_mut() {
            *last = 1.0;
        }
        let support = multiples.iter().map(|&m| m as f64 * step).collect();
        Self { step, multiples, support, pmf, cdf }
    }

    pub fn grid_step(&self) -> f64 {
        self.step
    }

    /// Support points in MW, ascending.
    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn min_support(&self) -> f64 {
        self.support[0]
    }

    pub fn max_support(&self) -> f64 {
        *self.support.last().unwrap()
    }

    pub fn mean(&self) -> f64 {
        self.support.iter().zip(&self.pmf).map(|(&x, &p)| x * p).sum()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.support
            .iter()
            .zip(&self.pmf)
            .map(|(&x, &p)| p * (x - mean) * (x - mean))
            .sum()
    }

    /// Pr(X <= x), read in the requested mode.
    ///
    /// Step mode is the exact right-continuous CDF. Interpolated mode runs
    /// linearly between support points, is clamped to the step value (zero)
    /// below the minimum support point and to one at and above the maximum.
    pub fn cdf(&self, x: f64, mode: CdfMode) -> f64 {
        if x >= self.max_support() {
            return 1.0;
        }
        if x < self.min_support() {
            return 0.0;
        }
        // index of first support point strictly greater than x
        let hi = self.support.partition_point(|&s| s <= x);
        match mode {
            CdfMode::Step => self.cdf[hi - 1],
            CdfMode::Interpolated => {
                let (x0, y0) = (self.support[hi - 1], self.cdf[hi - 1]);
                if x == x0 {
                    return y0;
                }
                let (x1, y1) = (self.support[hi], self.cdf[hi]);
                y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            }
        }
    }

    /// Distribution of the sum of independent draws from `self` and `other`.
    pub fn convolve(&self, other: &Self) -> Result<Self, CoptError> {
        if self.step != other.step {
            return Err(CoptError::GridStepMismatch(self.step, other.step));
        }
        let offset = self.multiples[0] + other.multiples[0];
        let span = (self.multiples[self.len() - 1] + other.multiples[other.len() - 1] - offset)
            as usize
            + 1;
        let mut dense = vec![0.0f64; span];
        for (i, &ma) in self.multiples.iter().enumerate() {
            let pa = self.pmf[i];
            for (j, &mb) in other.multiples.iter().enumerate() {
                dense[(ma + mb - offset) as usize] += pa * other.pmf[j];
            }
        }
        let mut multiples = Vec::new();
        let mut pmf = Vec::new();
        for (k, &p) in dense.iter().enumerate() {
            if p >= PRUNE_FLOOR {
                multiples.push(offset + k as i64);
                pmf.push(p);
            }
        }
        Ok(Self::from_parts(self.step, multiples, pmf))
    }

    /// Adds a deterministic (firm) capacity: translates the support by
    /// `c_mw` (rounded to the grid), leaving the pmf unchanged.
    pub fn shift_firm(&self, c_mw: f64) -> Self {
        let shift = to_multiple(c_mw, self.step);
        let multiples: Vec<i64> = self.multiples.iter().map(|&m| m + shift).collect();
        Self::from_parts(self.step, multiples, self.pmf.clone())
    }
}

/// Builds the capacity outage probability table for a fleet of independent
/// two-state units by sequential convolution (fixed fold order, so results
/// are bit-identical run to run).
///
/// Each unit's capacity is rounded half-up to the nearest grid multiple
/// before convolution.
pub fn build_copt(units: &[GeneratingUnit], grid_step: f64) -> Result<CapacityDistribution, CoptError> {
    if units.is_empty() {
        return Err(CoptError::EmptyUnits);
    }
    if !(grid_step > 0.0) || !grid_step.is_finite() {
        return Err(CoptError::NonPositiveGridStep(grid_step));
    }
    let mut acc: Option<CapacityDistribution> = None;
    for unit in units {
        if !unit.availability.is_finite() || !(0.0..=1.0).contains(&unit.availability) {
            return Err(CoptError::InvalidAvailability {
                name: unit.name.clone(),
                value: unit.availability,
            });
        }
        if !unit.capacity_mw.is_finite() || unit.capacity_mw < 0.0 {
            return Err(CoptError::InvalidCapacity {
                name: unit.name.clone(),
                value: unit.capacity_mw,
            });
        }
        let m = to_multiple(unit.capacity_mw, grid_step);
        let dist = if m == 0 || unit.availability == 1.0 {
            let at = if unit.availability == 1.0 { m } else { 0 };
            CapacityDistribution::from_parts(grid_step, vec![at], vec![1.0])
        } else if unit.availability == 0.0 {
            CapacityDistribution::from_parts(grid_step, vec![0], vec![1.0])
        } else {
            CapacityDistribution::from_parts(
                grid_step,
                vec![0, m],
                vec![1.0 - unit.availability, unit.availability],
            )
        };
        acc = Some(match acc {
            None => dist,
            Some(prev) => prev.convolve(&dist)?,
        });
    }
    Ok(acc.unwrap())
}
