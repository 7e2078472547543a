//! Capacity value solvers: what firm capacity (EFC) or extra demand (ELCC)
//! is equivalent, at unchanged risk, to a stochastic capacity addition Y.
//!
//! Four routes are provided: hindcast EFC and ELCC over an observed
//! (demand, wind) series, the independent-convolution EFC against a margin
//! model, the Garver exponential-tail closed form, and the small-capacity
//! approximation mu_Y - f_M'(0)/(2 f_M(0)) * var_Y.

use serde::Serialize;
use thiserror::Error;

use crate::copt::{CapacityDistribution, CdfMode};
use crate::risk::{DemandWindRecord, MarginModel};

#[derive(Debug, Error, PartialEq)]
pub enum CapacityValueError {
    #[error("record list is empty")]
    EmptyRecords,
    #[error("solver tolerance must be positive, got {0}")]
    NonPositiveTolerance(f64),
    #[error("addition distribution has negative support (min {0} MW)")]
    NegativeSupport(f64),
    #[error("fit window needs at least 2 points, got {0}")]
    WindowTooSmall(usize),
    #[error("fit window points must be distinct")]
    DegenerateWindow,
    #[error("margin CDF is not positive at window point {at} MW")]
    NonPositiveCdf { at: f64 },
    #[error("fitted tail rate must be positive, got {0}")]
    NonPositiveRate(f64),
    #[error("fitted tail exceeds probability one at the window top (implied {0})")]
    TailAboveUnity(f64),
    #[error("margin density at zero is not positive ({0}); cannot apply the small-capacity form")]
    DensityNotPositive(f64),
    #[error("variance must be non-negative, got {0}")]
    NegativeVariance(f64),
}

/// Which solver produced a capacity value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    HindcastEfc,
    HindcastElcc,
    IndependentEfc,
    Garver,
    SmallCapacity,
}

/// A solved capacity value with its solve diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityValueResult {
    pub method: Method,
    #[serde(rename = "value_mw")]
    pub value: f64,
    /// Risk level at the returned value: the period risk sum for hindcast
    /// methods, the margin CDF at minus the value otherwise.
    pub risk_at_solution: f64,
    /// Interval searched; the value always lies inside it.
    pub bracket: (f64, f64),
    pub iterations: u32,
    pub flags: Vec<String>,
}

const FLAT_FLAG: &str = "flat_interval";

struct MonotoneSolve {
    value: f64,
    iterations: u32,
    flat: bool,
}

/// Finds the solution set of f(x) = target for monotone f on [lo, hi] and
/// returns its midpoint. Both edges of the set are located by bisection to
/// within `tol`, so a unique root is resolved to tol while a flat stretch
/// of solutions (wider than 2*tol) yields its midpoint and a flag.
fn solve_monotone<F: Fn(f64) -> f64>(
    f: F,
    target: f64,
    lo: f64,
    hi: f64,
    tol: f64,
    increasing: bool,
) -> MonotoneSolve {
    if hi - lo <= tol {
        return MonotoneSolve { value: 0.5 * (lo + hi), iterations: 0, flat: false };
    }
    // Normalized to a nondecreasing excess h; its zero set is the target set.
    let h = |x: f64| {
        if increasing {
            f(x) - target
        } else {
            target - f(x)
        }
    };
    let mut iterations = 0;
    let left = if h(lo) >= 0.0 {
        lo
    } else {
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            if b - a <= tol {
                break;
            }
            let mid = 0.5 * (a + b);
            iterations += 1;
            if h(mid) >= 0.0 {
                b = mid;
            } else {
                a = mid;
            }
        }
        0.5 * (a + b)
    };
    let right = if h(hi) <= 0.0 {
        hi
    } else {
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            if b - a <= tol {
                break;
            }
            let mid = 0.5 * (a + b);
            iterations += 1;
            if h(mid) > 0.0 {
                b = mid;
            } else {
                a = mid;
            }
        }
        0.5 * (a + b)
    };
    MonotoneSolve {
        value: 0.5 * (left + right),
        iterations,
        flat: right - left > 2.0 * tol,
    }
}

fn flags_for(s: &MonotoneSolve) -> Vec<String> {
    if s.flat {
        vec![FLAT_FLAG.to_string()]
    } else {
        Vec::new()
    }
}

/// Hindcast EFC: the firm capacity whose risk sum matches the observed
/// wind's, solving sum_t F_X(d_t - y_t) = sum_t F_X(d_t - v) by bisection
/// over [min wind, max wind]. Both sides use the interpolated CDF.
pub fn efc_hindcast(
    fx: &CapacityDistribution,
    records: &[DemandWindRecord],
    tol_mw: f64,
) -> Result<CapacityValueResult, CapacityValueError> {
    if records.is_empty() {
        return Err(CapacityValueError::EmptyRecords);
    }
    if !(tol_mw > 0.0) {
        return Err(CapacityValueError::NonPositiveTolerance(tol_mw));
    }
    let lhs: f64 = records
        .iter()
        .map(|r| fx.cdf(r.net_demand_mw(), CdfMode::Interpolated))
        .sum();
    let rhs = |nu: f64| {
        records
            .iter()
            .map(|r| fx.cdf(r.demand_mw - nu, CdfMode::Interpolated))
            .sum::<f64>()
    };
    let lo = records.iter().map(|r| r.wind_mw).fold(f64::INFINITY, f64::min);
    let hi = records.iter().map(|r| r.wind_mw).fold(f64::NEG_INFINITY, f64::max);
    let s = solve_monotone(rhs, lhs, lo, hi, tol_mw, false);
    Ok(CapacityValueResult {
        method: Method::HindcastEfc,
        value: s.value,
        risk_at_solution: rhs(s.value),
        bracket: (lo, hi),
        iterations: s.iterations,
        flags: flags_for(&s),
    })
}

/// Hindcast ELCC: the uniform extra demand supportable with the wind in
/// place at unchanged risk, solving sum_t F_X(d_t + L - y_t) = sum_t F_X(d_t)
/// by bisection over [0, max wind].
pub fn elcc_hindcast(
    fx: &CapacityDistribution,
    records: &[DemandWindRecord],
    tol_mw: f64,
) -> Result<CapacityValueResult, CapacityValueError> {
    if records.is_empty() {
        return Err(CapacityValueError::EmptyRecords);
    }
    if !(tol_mw > 0.0) {
        return Err(CapacityValueError::NonPositiveTolerance(tol_mw));
    }
    let target: f64 = records
        .iter()
        .map(|r| fx.cdf(r.demand_mw, CdfMode::Interpolated))
        .sum();
    let lhs = |load: f64| {
        records
            .iter()
            .map(|r| fx.cdf(r.demand_mw + load - r.wind_mw, CdfMode::Interpolated))
            .sum::<f64>()
    };
    let hi = records.iter().map(|r| r.wind_mw).fold(f64::NEG_INFINITY, f64::max);
    let s = solve_monotone(lhs, target, 0.0, hi, tol_mw, true);
    Ok(CapacityValueResult {
        method: Method::HindcastElcc,
        value: s.value,
        risk_at_solution: lhs(s.value),
        bracket: (0.0, hi),
        iterations: s.iterations,
        flags: flags_for(&s),
    })
}

/// EFC for an addition independent of the margin: computes the mixed risk
/// sum_y p_Y(y) F_M(-y) and inverts F_M at that level by bisection over the
/// support of Y. A flat CDF at the target level yields the interval
/// midpoint with a `flat_interval` flag.
pub fn efc_independent(
    margin: &MarginModel,
    y_dist: &CapacityDistribution,
    tol_mw: f64,
) -> Result<CapacityValueResult, CapacityValueError> {
    if !(tol_mw > 0.0) {
        return Err(CapacityValueError::NonPositiveTolerance(tol_mw));
    }
    if y_dist.min_support() < 0.0 {
        return Err(CapacityValueError::NegativeSupport(y_dist.min_support()));
    }
    let lhs: f64 = y_dist
        .support()
        .iter()
        .zip(y_dist.pmf())
        .map(|(&y, &p)| p * margin.cdf(-y))
        .sum();
    let f = |nu: f64| margin.cdf(-nu);
    let (lo, hi) = (y_dist.min_support(), y_dist.max_support());
    let s = solve_monotone(f, lhs, lo, hi, tol_mw, false);
    Ok(CapacityValueResult {
        method: Method::IndependentEfc,
        value: s.value,
        risk_at_solution: margin.cdf(-s.value),
        bracket: (lo, hi),
        iterations: s.iterations,
        flags: flags_for(&s),
    })
}

/// Fitted exponential lower tail of a margin CDF:
/// F_M(m) ~ c * exp(lambda * m) for m <= m0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GarverFit {
    pub lambda_per_mw: f64,
    pub c: f64,
    /// Top of the fit window; the exponential form is only trusted below it.
    pub m0_mw: f64,
    pub fit_window: Vec<f64>,
    pub rms_log_residual: f64,
}

/// Ordinary least squares of ln F_M(m) against m over the window points.
pub fn garver_fit(margin: &MarginModel, window: &[f64]) -> Result<GarverFit, CapacityValueError> {
    if window.len() < 2 {
        return Err(CapacityValueError::WindowTooSmall(window.len()));
    }
    let mut points = window.to_vec();
    points.sort_by(f64::total_cmp);
    let logs: Vec<f64> = points
        .iter()
        .map(|&m| {
            let p = margin.cdf(m);
            if p > 0.0 {
                Ok(p.ln())
            } else {
                Err(CapacityValueError::NonPositiveCdf { at: m })
            }
        })
        .collect::<Result<_, _>>()?;
    let n = points.len() as f64;
    let x_mean = points.iter().sum::<f64>() / n;
    let z_mean = logs.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxz = 0.0;
    for (&x, &z) in points.iter().zip(&logs) {
        sxx += (x - x_mean) * (x - x_mean);
        sxz += (x - x_mean) * (z - z_mean);
    }
    if sxx == 0.0 {
        return Err(CapacityValueError::DegenerateWindow);
    }
    let lambda = sxz / sxx;
    if !(lambda > 0.0) {
        return Err(CapacityValueError::NonPositiveRate(lambda));
    }
    let intercept = z_mean - lambda * x_mean;
    let c = intercept.exp();
    let m0 = *points.last().unwrap();
    let implied_top = c * (lambda * m0).exp();
    if implied_top > 1.0 + 1e-9 {
        return Err(CapacityValueError::TailAboveUnity(implied_top));
    }
    let rms = (points
        .iter()
        .zip(&logs)
        .map(|(&x, &z)| {
            let r = z - (intercept + lambda * x);
            r * r
        })
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(GarverFit {
        lambda_per_mw: lambda,
        c,
        m0_mw: m0,
        fit_window: points,
        rms_log_residual: rms,
    })
}

/// Garver closed form: the capacity value is set by the Laplace transform
/// of Y at the tail rate, v = -ln(E exp(-lambda Y)) / lambda.
pub fn garver_efc(
    fit: &GarverFit,
    y_dist: &CapacityDistribution,
) -> Result<CapacityValueResult, CapacityValueError> {
    if !(fit.lambda_per_mw > 0.0) {
        return Err(CapacityValueError::NonPositiveRate(fit.lambda_per_mw));
    }
    if y_dist.min_support() < 0.0 {
        return Err(CapacityValueError::NegativeSupport(y_dist.min_support()));
    }
    let transform: f64 = y_dist
        .support()
        .iter()
        .zip(y_dist.pmf())
        .map(|(&y, &p)| p * (-fit.lambda_per_mw * y).exp())
        .sum();
    let value = -transform.ln() / fit.lambda_per_mw;
    Ok(CapacityValueResult {
        method: Method::Garver,
        value,
        risk_at_solution: fit.c * transform,
        bracket: (y_dist.min_support(), y_dist.max_support()),
        iterations: 0,
        flags: Vec::new(),
    })
}

/// Small-capacity approximation, valid when the variation in Y is small
/// relative to the margin's: mu_Y - f_M'(0)/(2 f_M(0)) * var_Y.
pub fn small_capacity_efc(
    margin: &MarginModel,
    mu_y_mw: f64,
    var_y_mw2: f64,
) -> Result<CapacityValueResult, CapacityValueError> {
    if !(var_y_mw2 >= 0.0) {
        return Err(CapacityValueError::NegativeVariance(var_y_mw2));
    }
    let density = margin.density(0.0);
    if !(density > 0.0) || !density.is_finite() {
        return Err(CapacityValueError::DensityNotPositive(density));
    }
    let slope = margin.density_slope(0.0);
    let value = mu_y_mw - slope / (2.0 * density) * var_y_mw2;
    Ok(CapacityValueResult {
        method: Method::SmallCapacity,
        value,
        risk_at_solution: margin.cdf(-value),
        bracket: (value, value),
        iterations: 0,
        flags: Vec::new(),
    })
}
