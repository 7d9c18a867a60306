//! Acceptance suite: one PASS/FAIL line per criterion; exits non-zero if any
//! criterion fails.

use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use feestat::cli::{run_pipeline, table2_rows, Experiment, ExperimentConfig};
use feestat::demand::{gen_demand, DemandModel};
use feestat::feesim::Eip1559Params;
use feestat::random::RandomSource;
use feestat::rca::{
    eip1559_to_rca, mc_log_coefficient, simulate_ar1, simulate_rca1, simulate_rca1_traced, Ar1Params,
    Rca1Params,
};
use feestat::stationarity::{boundary_curve, wang_classify, wang_integral, EULER_GAMMA};
use feestat::stats::summary_stats;
use feestat::unitroot::{adf_test, AdfOptions};
use feestat::TimeSeries;

const TOL: f64 = 1e-10;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn default_demand() -> DemandModel {
    DemandModel::NormalIid {
        mu: 1.36e7,
        sigma2: 5.51e5,
        clamp: false,
    }
}

fn basefee_nonstationarity() -> Outcome {
    let config = ExperimentConfig {
        n_blocks: 100_000,
        n_sims: 10,
        seed: 20210801,
        ..ExperimentConfig::new(Experiment::Table2)
    };
    let start = Instant::now();
    let rows = match table2_rows(&config) {
        Ok(rows) => rows,
        Err(e) => return outcome(false, format!("error: {e}")),
    };
    let elapsed = start.elapsed();
    let kept = rows.iter().filter(|r| r.adf.pvalue > 0.05).count();
    outcome(
        kept >= 9 && elapsed < Duration::from_secs(60),
        format!("{kept}/10 runs with p > 0.05, {:.1} s", elapsed.as_secs_f64()),
    )
}

fn demand_stationarity() -> Outcome {
    let target = Eip1559Params::default().target;
    let mut rejected = 0;
    for seed in 0..100 {
        let s = gen_demand(&default_demand(), 100_000, target, &RandomSource::new(seed, 0)).unwrap();
        if adf_test(&s, &AdfOptions::default()).unwrap().pvalue < 1e-6 {
            rejected += 1;
        }
    }
    outcome(rejected >= 99, format!("{rejected}/100 seeds with p < 1e-6"))
}

fn ar1_asymptotics() -> Outcome {
    let p = Ar1Params { mu: 0.0, alpha: 0.5, sigma: 1.0, x0: 0.0 };
    let s = simulate_ar1(&p, 1_000_000, &RandomSource::new(3, 0)).unwrap();
    let var = summary_stats(&s).unwrap().variance;
    let rel = (var / (4.0 / 3.0) - 1.0).abs();
    outcome(rel < 0.01, format!("sample variance {var:.5}, relative error {rel:.2e}"))
}

/// Σ_{k≥1} (−1)^{k+1} λ^k/k! · ∫₀¹(1−w²)^{k−1} dw, summed to convergence.
fn taylor_oracle(lambda: f64) -> f64 {
    let (mut sum, mut j, mut term) = (0.0, 1.0, 1.0);
    for k in 1..80 {
        if k > 1 {
            let m = (k - 1) as f64;
            j *= 2.0 * m / (2.0 * m + 1.0);
        }
        term *= lambda / k as f64;
        sum += if k % 2 == 1 { term * j } else { -term * j };
    }
    sum
}

/// Product-midpoint rule in u = 1 − w² with the 1/(2√(1−u)) weight
/// integrated exactly on each of `panels` panels.
fn midpoint_oracle(lambda: f64, panels: usize) -> f64 {
    let h = 1.0 / panels as f64;
    (0..panels)
        .map(|i| {
            let (a, b) = (i as f64 * h, (i + 1) as f64 * h);
            let u = 0.5 * (a + b);
            let g = -(-lambda * u).exp_m1() / u;
            g * ((1.0 - a).sqrt() - (1.0 - b).max(0.0).sqrt())
        })
        .sum()
}

fn wang_integral_accuracy() -> Outcome {
    let i01 = wang_integral(0.1, TOL).unwrap();
    let taylor = taylor_oracle(0.1);
    let taylor_ok = (i01 - taylor).abs() <= 1e-6;
    let quoted_gap = (i01 - 0.0967556).abs();

    let mut worst = 0.0f64;
    for l in [0.1, 1.0, 10.0, 100.0] {
        let got = wang_integral(l, TOL).unwrap();
        worst = worst.max(((got - midpoint_oracle(l, 1_000_000)) / got).abs());
    }

    let mut slowest = Duration::ZERO;
    for l in [0.0, 1e-6, 0.1, 1.0, 100.0, 1e6, 3.6e11, 1e12] {
        let start = Instant::now();
        wang_integral(l, TOL).unwrap();
        slowest = slowest.max(start.elapsed());
    }

    outcome(
        taylor_ok && worst < 1e-8 && slowest < Duration::from_millis(10),
        format!(
            "I(0.1) = {i01:.10} vs Taylor {taylor:.10} (quoted 0.0967556 differs by {quoted_gap:.1e}); \
             midpoint max rel err {worst:.1e}; slowest eval {:.3} ms",
            slowest.as_secs_f64() * 1e3
        ),
    )
}

fn boundary_anchor() -> Outcome {
    let mut grid = vec![0.0];
    grid.extend((1..=200).map(|i| 0.25 * i as f64));
    grid.extend([1e3, 1e6, 1e9]);
    let pts = boundary_curve(&grid, TOL).unwrap();
    let anchor = pts[0].sigma2_beta;
    let anchor_ok = (anchor - 3.562144).abs() < 1e-6 && (anchor - 2.0 * EULER_GAMMA.exp()).abs() < 1e-12;
    let worst = pts
        .iter()
        .map(|p| wang_classify(p.mu_beta, p.sigma2_beta, TOL).unwrap().margin.abs())
        .fold(0.0, f64::max);
    outcome(
        anchor_ok && worst < 1e-8,
        format!("sigma2 at lambda=0: {anchor:.9}; max |margin| over {} points {worst:.1e}", pts.len()),
    )
}

fn default_setup_classification() -> Outcome {
    let rca = eip1559_to_rca(&Eip1559Params::default(), 1.36e7, 5.51e5).unwrap();
    let verdict = wang_classify(rca.mu_beta, rca.sigma2_beta, TOL).unwrap();
    let lyap = mc_log_coefficient(&rca, 1_000_000, &RandomSource::new(1, 0)).unwrap();
    outcome(
        !verdict.satisfied && lyap.mean > 1e-3,
        format!(
            "mu_beta={}, sigma2_beta={:e}: satisfied={}, margin={:.6}; E ln|beta| = {:.6e}",
            rca.mu_beta, rca.sigma2_beta, verdict.satisfied, verdict.margin, lyap.mean
        ),
    )
}

fn unit_root_calibration() -> Outcome {
    let n = 1000;
    let opts = AdfOptions::default();
    let mut size_hits = 0;
    let mut power_hits = 0;
    for seed in 0..200 {
        let z = RandomSource::new(seed, 7).standard_normals(n);
        let mut acc = 0.0;
        let walk: Vec<f64> = z.iter().map(|e| { acc += e; acc }).collect();
        let walk = TimeSeries::from_values("walk", walk).unwrap();
        if adf_test(&walk, &opts).unwrap().rejects(0.05) {
            size_hits += 1;
        }
        let ar = Ar1Params { mu: 0.0, alpha: 0.5, sigma: 1.0, x0: 0.0 };
        let path = simulate_ar1(&ar, n, &RandomSource::new(seed, 8)).unwrap();
        if adf_test(&path, &opts).unwrap().rejects(0.05) {
            power_hits += 1;
        }
    }
    let size = size_hits as f64 / 200.0;
    let power = power_hits as f64 / 200.0;
    outcome(
        (0.02..=0.09).contains(&size) && power > 0.99,
        format!("size {size:.3} (random walks), power {power:.3} (AR(1), alpha=0.5)"),
    )
}

fn rerun_matches(config: ExperimentConfig, scratch: &Path) -> Result<(), String> {
    let first_dir = scratch.join(format!("{:?}-a", config.experiment));
    let second_dir = scratch.join(format!("{:?}-b", config.experiment));
    let first = run_pipeline(&ExperimentConfig { output_dir: first_dir.clone(), ..config })
        .map_err(|e| e.to_string())?;
    let manifest = fs::read_to_string(first_dir.join("manifest.json")).map_err(|e| e.to_string())?;
    let mut replay = ExperimentConfig::from_json(&manifest).map_err(|e| e.to_string())?;
    replay.output_dir = second_dir.clone();
    let second = run_pipeline(&replay).map_err(|e| e.to_string())?;
    if first.artifacts != second.artifacts {
        return Err(format!("{:?}: checksums differ", replay.experiment));
    }
    for name in first.artifacts.keys() {
        let a = fs::read(first_dir.join(name)).map_err(|e| e.to_string())?;
        let b = fs::read(second_dir.join(name)).map_err(|e| e.to_string())?;
        if a != b {
            return Err(format!("{name} differs"));
        }
    }
    Ok(())
}

fn determinism() -> Outcome {
    let scratch = tempfile::tempdir().unwrap();
    let experiments = [
        Experiment::DemandEda,
        Experiment::BasefeeRuns,
        Experiment::Table2,
        Experiment::Fig4,
        Experiment::Classify,
    ];
    let mut failures = Vec::new();
    for e in experiments {
        let mut config = ExperimentConfig {
            n_blocks: 5_000,
            n_sims: 3,
            seed: 99,
            ..ExperimentConfig::new(e)
        };
        config.region.mu_points = 60;
        config.region.sigma2_points = 60;
        if let Err(msg) = rerun_matches(config, scratch.path()) {
            failures.push(msg);
        }
    }
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            format!("{} experiments reproduced byte-identically from their manifests", experiments.len())
        } else {
            failures.join("; ")
        },
    )
}

fn rca_reductions() -> Outcome {
    let rng = RandomSource::new(2021, 4);
    let ar = Ar1Params { mu: 2.0, alpha: 0.7, sigma: 1.5, x0: -1.0 };
    let a = simulate_ar1(&ar, 100_000, &rng).unwrap();
    let b = simulate_rca1(&ar.as_rca1(), 100_000, &rng).unwrap();
    let ar_ok = a.values() == b.values();

    let walk = Rca1Params { alpha: 0.0, mu_beta: 1.0, sigma2_beta: 0.0, sigma2_eps: 1.0, x0: 0.0 };
    let trace = simulate_rca1_traced(&walk, 100_000, &rng).unwrap();
    let mut prev = walk.x0;
    let mut walk_ok = true;
    for (x, eps) in trace.path.values().iter().zip(&trace.innovations) {
        walk_ok &= *x == prev + eps;
        prev = *x;
    }
    outcome(
        ar_ok && walk_ok,
        format!("AR(1) reduction bit-exact: {ar_ok}; random-walk increments equal innovations: {walk_ok}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 base-fee non-stationarity", basefee_nonstationarity),
        ("2 demand stationarity", demand_stationarity),
        ("3 AR(1) asymptotics", ar1_asymptotics),
        ("4 Wang integral", wang_integral_accuracy),
        ("5 boundary anchor", boundary_anchor),
        ("6 default-setup classification", default_setup_classification),
        ("7 unit-root calibration", unit_root_calibration),
        ("8 determinism", determinism),
        ("9 RCA reduction identities", rca_reductions),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let r = check();
        println!("[{}] criterion {name}: {}", if r.passed { "PASS" } else { "FAIL" }, r.detail);
        if !r.passed {
            failed += 1;
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
