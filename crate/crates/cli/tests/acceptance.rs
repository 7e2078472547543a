//! Acceptance suite: one test per release criterion, each printing a pass
//! line with the measured values (visible with `--nocapture`).
//!
//! Run with: cargo test -p adequacy-cli --test acceptance

use std::collections::HashMap;
use std::time::Instant;

use chrono::{NaiveDate, NaiveDateTime};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use adequacy_core::bootstrap::{bootstrap_statistic, percentile_ci, BootstrapConfig};
use adequacy_core::capacity_value::{
    efc_hindcast, efc_independent, elcc_hindcast, garver_efc, garver_fit, small_capacity_efc,
};
use adequacy_core::copt::{build_copt, CapacityDistribution, CdfMode, GeneratingUnit};
use adequacy_core::risk::{lole, lole_contributions, DemandWindRecord, MarginModel};
use adequacy_cli::synth::{generate_synthetic, SyntheticSpec};
use adequacy_cli::transform::rescale;

fn ts(hour: i64) -> NaiveDateTime {
    NaiveDate::from_ymd_opt(2006, 2, 1).unwrap().and_hms_opt(0, 0, 0).unwrap()
        + chrono::Duration::hours(hour)
}

fn rec(hour: i64, demand: f64, wind: f64) -> DemandWindRecord {
    DemandWindRecord::new(ts(hour), demand, wind).unwrap()
}

fn two_unit_copt() -> CapacityDistribution {
    let units = [
        GeneratingUnit::new("a", 100.0, 0.9).unwrap(),
        GeneratingUnit::new("b", 100.0, 0.9).unwrap(),
    ];
    build_copt(&units, 1.0).unwrap()
}

/// Criterion 1: build_copt for 12 random units matches exhaustive 2^12
/// enumeration per-point within 1e-12, in under a second.
#[test]
fn criterion_1_copt_matches_exhaustive_enumeration() {
    let start = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(2024);
    let step = 5.0;
    let units: Vec<GeneratingUnit> = (0..12)
        .map(|i| {
            GeneratingUnit::new(
                format!("u{i}"),
                rng.random_range(5.0..120.0),
                rng.random_range(0.75..0.9),
            )
            .unwrap()
        })
        .collect();
    let table = build_copt(&units, step).unwrap();

    let mut oracle: HashMap<i64, f64> = HashMap::new();
    for state in 0u32..(1 << 12) {
        let mut capacity = 0i64;
        let mut prob = 1.0;
        for (i, unit) in units.iter().enumerate() {
            if state >> i & 1 == 1 {
                capacity += (unit.capacity_mw / step).round() as i64;
                prob *= unit.availability;
            } else {
                prob *= 1.0 - unit.availability;
            }
        }
        *oracle.entry(capacity).or_insert(0.0) += prob;
    }

    assert_eq!(table.len(), oracle.len());
    let mut worst = 0.0f64;
    for (i, &mw) in table.support().iter().enumerate() {
        let key = (mw / step).round() as i64;
        let expect = oracle.get(&key).copied().unwrap_or(0.0);
        worst = worst.max((table.pmf()[i] - expect).abs());
    }
    assert!(worst <= 1e-12, "worst per-point deviation {worst}");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!(
        "PASS criterion 1: {} support points, worst deviation {worst:.2e}, {elapsed:?}",
        table.len()
    );
}

/// Criterion 2: on the analytic exponential margin (rate 0.01, scale 0.5)
/// with Y = {0: 0.1, 100: 0.9}, the Garver closed form returns 84.15 MW
/// (hand value, checked against the exact transform), the independent
/// solver agrees within 0.1 MW, and hindcast ELCC equals hindcast EFC
/// within 0.1 MW when the margin is exponential over all evaluation points.
#[test]
fn criterion_2_garver_equality_suite() {
    let start = Instant::now();
    let margin = MarginModel::exponential_tail(0.01, 0.5).unwrap();
    let fit = garver_fit(&margin, &[-400.0, -300.0, -200.0, -100.0, 0.0]).unwrap();
    assert!((fit.lambda_per_mw - 0.01).abs() < 1e-12);
    assert!((fit.c - 0.5).abs() < 1e-12);

    let y = CapacityDistribution::from_pmf(10.0, &[(0.0, 0.1), (100.0, 0.9)]).unwrap();
    let garver = garver_efc(&fit, &y).unwrap();
    let closed_form = -(0.1f64 + 0.9 * (-1.0f64).exp()).ln() / 0.01;
    assert!((garver.value - closed_form).abs() <= 1e-9);
    assert!((garver.value - 84.15).abs() <= 0.1, "garver {} vs 84.15", garver.value);

    let independent = efc_independent(&margin, &y, 0.01).unwrap();
    assert!(
        (independent.value - garver.value).abs() <= 0.1,
        "independent {} vs garver {}",
        independent.value,
        garver.value
    );

    // Hindcast EFC and ELCC coincide when every evaluation point stays in
    // the exponential region (headroom above the largest demand).
    let data = generate_synthetic(&SyntheticSpec {
        lambda_per_mw: 0.01,
        tail_scale: 0.15,
        grid_step: 1.0,
        record_count: 300,
        seed: 3,
        y_pmf: vec![(0.0, 0.1), (100.0, 0.9)],
        demand_base_mw: 800.0,
        demand_spread_steps: 50,
        tail_headroom_mw: 120.0,
    })
    .unwrap();
    let efc = efc_hindcast(&data.copt, &data.records, 0.001).unwrap();
    let elcc = elcc_hindcast(&data.copt, &data.records, 0.001).unwrap();
    assert!(efc.flags.is_empty() && elcc.flags.is_empty());
    assert!(
        (efc.value - elcc.value).abs() <= 0.1,
        "efc {} vs elcc {}",
        efc.value,
        elcc.value
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!(
        "PASS criterion 2: garver {:.4}, independent {:.4}, efc {:.4} vs elcc {:.4}, {elapsed:?}",
        garver.value, independent.value, efc.value, elcc.value
    );
}

/// Criterion 3: a firm addition of c MW has capacity value c under all four
/// methods (within 0.01 MW for the solvers; exactly for the closed forms).
#[test]
fn criterion_3_firm_identities() {
    let fx = two_unit_copt();
    let margin = MarginModel::exponential_tail(0.01, 0.5).unwrap();
    let fit = garver_fit(&margin, &[-300.0, -150.0, 0.0]).unwrap();
    for &c in &[0.0, 50.0, 137.5] {
        let records = [rec(0, 150.0, c), rec(1, 170.0, c), rec(2, 190.0, c)];
        let efc = efc_hindcast(&fx, &records, 0.01).unwrap().value;
        let elcc = elcc_hindcast(&fx, &records, 0.01).unwrap().value;
        assert!((efc - c).abs() <= 0.01, "hindcast EFC {efc} for firm {c}");
        assert!((elcc - c).abs() <= 0.01, "hindcast ELCC {elcc} for firm {c}");

        let y = CapacityDistribution::point_mass(2.5, c).unwrap();
        let ind = efc_independent(&margin, &y, 0.01).unwrap().value;
        assert!((ind - c).abs() <= 0.01, "independent EFC {ind} for firm {c}");

        let garver = garver_efc(&fit, &y).unwrap().value;
        assert!((garver - c).abs() <= 1e-9, "garver {garver} for firm {c}");

        let small = small_capacity_efc(&margin, c, 0.0).unwrap().value;
        assert_eq!(small, c, "small-capacity for firm {c}");
    }
    println!("PASS criterion 3: all four methods return c for firm c in {{0, 50, 137.5}}");
}

/// Criterion 4: shrinking Y_eps = mu + eps(Y - mu) over eps in {1, 1/2, 1/4},
/// the gap between the independent solve and the small-capacity form
/// decreases, and at eps = 1/4 is at most 5% of the eps = 1 gap.
#[test]
fn criterion_4_small_capacity_convergence() {
    let margin = MarginModel::exponential_tail(0.01, 0.5).unwrap();
    let mu = 90.0;
    let mut errors = Vec::new();
    for &eps in &[1.0, 0.5, 0.25] {
        let low = mu - 90.0 * eps;
        let high = mu + 10.0 * eps;
        let y = CapacityDistribution::from_pmf(2.5, &[(low, 0.1), (high, 0.9)]).unwrap();
        let independent = efc_independent(&margin, &y, 1e-4).unwrap().value;
        let small = small_capacity_efc(&margin, mu, y.variance()).unwrap().value;
        errors.push((independent - small).abs());
    }
    assert!(errors[0] > errors[1] && errors[1] > errors[2], "errors {errors:?} must decrease");
    assert!(
        errors[2] <= 0.05 * errors[0],
        "error at eps=1/4 ({}) must be at most 5% of eps=1 ({})",
        errors[2],
        errors[0]
    );
    println!(
        "PASS criterion 4: errors {:.4} -> {:.4} -> {:.4} MW (ratio {:.3}%)",
        errors[0],
        errors[1],
        errors[2],
        100.0 * errors[2] / errors[0]
    );
}

/// Criterion 5: under the exponential margin, the Garver value of a sum of
/// independent additions is the sum of their values, to 1e-9 MW.
#[test]
fn criterion_5_garver_additivity() {
    let margin = MarginModel::exponential_tail(0.01, 0.5).unwrap();
    let fit = garver_fit(&margin, &[-300.0, 0.0]).unwrap();
    let y1 = CapacityDistribution::from_pmf(10.0, &[(0.0, 0.1), (100.0, 0.9)]).unwrap();
    let y2 = CapacityDistribution::from_pmf(10.0, &[(0.0, 0.3), (50.0, 0.7)]).unwrap();
    let combined = y1.convolve(&y2).unwrap();
    let v1 = garver_efc(&fit, &y1).unwrap().value;
    let v2 = garver_efc(&fit, &y2).unwrap().value;
    let v12 = garver_efc(&fit, &combined).unwrap().value;
    let gap = (v12 - v1 - v2).abs();
    assert!(gap <= 1e-9, "additivity gap {gap}");
    println!("PASS criterion 5: {v1:.4} + {v2:.4} vs {v12:.4} (gap {gap:.2e} MW)");
}

/// 0.01 MW exhaustive scan over the wind bracket; midpoint of the set of
/// minimal-residual grid points.
fn grid_scan_efc(fx: &CapacityDistribution, records: &[DemandWindRecord]) -> f64 {
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
    let steps = ((hi - lo) / 0.01).round() as usize;
    let mut best = f64::INFINITY;
    let mut arg = Vec::new();
    for k in 0..=steps {
        let nu = lo + 0.01 * k as f64;
        let residual = (rhs(nu) - lhs).abs();
        if residual < best - 1e-15 {
            best = residual;
            arg = vec![nu];
        } else if (residual - best).abs() <= 1e-15 {
            arg.push(nu);
        }
    }
    0.5 * (arg[0] + arg[arg.len() - 1])
}

/// Criterion 6: the hindcast EFC solver agrees with the 0.01 MW grid-scan
/// oracle on ten synthetic datasets within tol + 0.01 MW, and returns 75 MW
/// on the worked two-record fixture.
#[test]
fn criterion_6_hindcast_solver_vs_grid_scan() {
    let tol = 0.01;
    let mut worst = 0.0f64;
    for seed in 0..10 {
        let data = generate_synthetic(&SyntheticSpec {
            lambda_per_mw: 0.01,
            tail_scale: 0.3,
            grid_step: 1.0,
            record_count: 200,
            seed,
            y_pmf: vec![(0.0, 0.2), (60.0, 0.5), (120.0, 0.3)],
            demand_base_mw: 800.0,
            demand_spread_steps: 100,
            tail_headroom_mw: 0.0,
        })
        .unwrap();
        let solved = efc_hindcast(&data.copt, &data.records, tol).unwrap().value;
        let oracle = grid_scan_efc(&data.copt, &data.records);
        let gap = (solved - oracle).abs();
        worst = worst.max(gap);
        assert!(gap <= tol + 0.01, "seed {seed}: solver {solved} vs oracle {oracle}");
    }

    let fx = two_unit_copt();
    let fixture = [rec(17, 150.0, 50.0), rec(18, 150.0, 100.0)];
    let value = efc_hindcast(&fx, &fixture, tol).unwrap().value;
    assert!((value - 75.0).abs() <= 0.01, "fixture EFC {value}");
    println!("PASS criterion 6: worst solver-oracle gap {worst:.4} MW; fixture EFC {value:.3} MW");
}

/// Criterion 7: a fixed seed yields a byte-identical summary across repeat
/// runs and across 1-thread vs multi-thread execution; all-identical
/// records collapse the interval to a point.
#[test]
fn criterion_7_bootstrap_determinism() {
    let fx = two_unit_copt();
    let records: Vec<DemandWindRecord> =
        (0..60).map(|t| rec(t, 150.0 + (t * 7 % 60) as f64, (t * 13 % 80) as f64)).collect();
    let config = BootstrapConfig { replicates: 200, seed: 1, ..Default::default() };
    let stat = |r: &[DemandWindRecord]| lole(&fx, r, CdfMode::Step).map(|x| x.lole);

    let runs: Vec<String> = (0..2)
        .map(|_| {
            serde_json::to_string(&bootstrap_statistic(&records, "lole", stat, &config).unwrap())
                .unwrap()
        })
        .collect();
    assert_eq!(runs[0], runs[1], "repeat runs must serialize identically");

    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let many = rayon::ThreadPoolBuilder::new().num_threads(8).build().unwrap();
    let on_one = one.install(|| bootstrap_statistic(&records, "lole", stat, &config).unwrap());
    let on_many = many.install(|| bootstrap_statistic(&records, "lole", stat, &config).unwrap());
    assert_eq!(
        serde_json::to_string(&on_one).unwrap(),
        serde_json::to_string(&on_many).unwrap(),
        "thread count must not change the summary"
    );
    assert_eq!(serde_json::to_string(&on_one).unwrap(), runs[0]);

    let identical: Vec<DemandWindRecord> = (0..30).map(|_| rec(0, 150.0, 50.0)).collect();
    let degenerate = bootstrap_statistic(&identical, "lole", stat, &config).unwrap();
    assert_eq!(degenerate.ci.0, degenerate.ci.1);
    assert_eq!(degenerate.ci.0, degenerate.point_estimate);
    println!(
        "PASS criterion 7: identical summaries across runs and thread counts; degenerate CI width 0"
    );
}

/// Criterion 8: on a synthetic dataset where raising the wind scale
/// concentrates LOLE into two records, the top-2 contribution share is at
/// least 60% at the high scale and the bootstrap LOLE interval ratio grows
/// by at least 2x from the low scale, within 30 seconds.
#[test]
fn criterion_8_concentration_widens_bootstrap_intervals() {
    let start = Instant::now();
    let units: Vec<GeneratingUnit> = (0..10)
        .map(|i| GeneratingUnit::new(format!("u{i}"), 100.0, 0.9).unwrap())
        .collect();
    let fx = build_copt(&units, 1.0).unwrap();
    let records: Vec<DemandWindRecord> = (0..400)
        .map(|t| {
            if t == 100 || t == 101 {
                rec(t, 800.0, 0.0)
            } else {
                rec(t, 780.0, 60.0)
            }
        })
        .collect();

    let mut ratios = Vec::new();
    let mut top2 = Vec::new();
    for &scale in &[1.0, 5.0] {
        let scaled = rescale(&records, scale, 1.0).unwrap();
        let curve = lole_contributions(&fx, &scaled, CdfMode::Step).unwrap();
        top2.push(curve.entries[1].cumulative_share);
        let config = BootstrapConfig { replicates: 200, seed: 42, ..Default::default() };
        let summary = bootstrap_statistic(
            &scaled,
            "lole",
            |r| lole(&fx, r, CdfMode::Step).map(|x| x.lole),
            &config,
        )
        .unwrap();
        ratios.push(summary.ci_ratio.expect("lower CI bound must stay positive"));
    }

    assert!(top2[1] >= 0.60, "top-2 share at high wind scale is {}", top2[1]);
    assert!(top2[1] > top2[0], "concentration must grow with the wind scale");
    assert!(
        ratios[1] >= 2.0 * ratios[0],
        "interval ratio {} at high scale vs {} at low scale",
        ratios[1],
        ratios[0]
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!(
        "PASS criterion 8: top-2 share {:.1}% -> {:.1}%, CI ratio {:.2} -> {:.2}, {elapsed:?}",
        100.0 * top2[0],
        100.0 * top2[1],
        ratios[0],
        ratios[1]
    );
}

/// Criterion 9: the pinned interpolation quantile rule on 1..200 at level
/// 0.95 gives (5.975, 195.025).
#[test]
fn criterion_9_percentile_rule() {
    let values: Vec<f64> = (1..=200).map(|v| v as f64).collect();
    let (lo, hi) = percentile_ci(&values, 0.95).unwrap();
    assert!((lo - 5.975).abs() <= 1e-9, "lower quantile {lo}");
    assert!((hi - 195.025).abs() <= 1e-9, "upper quantile {hi}");
    assert_eq!(percentile_ci(&[5.0], 0.95).unwrap(), (5.0, 5.0));
    assert_eq!(percentile_ci(&[1.0, 2.0], 0.5).unwrap(), (1.25, 1.75));
    println!("PASS criterion 9: CI ({lo}, {hi})");
}
