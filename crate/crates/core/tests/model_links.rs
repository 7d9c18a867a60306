//! Cross-module checks linking the fee recursion, its random-coefficient
//! form and the stationarity tools.

use feestat::demand::{gen_demand, DemandModel};
use feestat::feesim::{simulate_basefees, Eip1559Params};
use feestat::random::RandomSource;
use feestat::rca::{eip1559_to_rca, mc_log_coefficient, Rca1Params};
use feestat::stationarity::wang_classify;
use feestat::stats::summary_stats;
use feestat::unitroot::{adf_test, AdfOptions};

#[test]
fn update_factors_match_rca_coefficient_moments() {
    let params = Eip1559Params::default();
    let model = DemandModel::default();
    let demand = gen_demand(&model, 100_000, params.target, &RandomSource::new(17, 0)).unwrap();
    let path = simulate_basefees(&params, &demand).unwrap();
    let factors = &path.factors;
    let s = summary_stats(factors).unwrap();
    let rca = eip1559_to_rca(&params, 1.36e7, 5.51e5).unwrap();

    let se_mean = (rca.sigma2_beta / s.n as f64).sqrt();
    assert!((s.mean - rca.mu_beta).abs() < 5.0 * se_mean, "mean {} vs {}", s.mean, rca.mu_beta);
    // Var of a sample variance for normal data: 2σ⁴/(n−1).
    let se_var = rca.sigma2_beta * (2.0 / (s.n as f64 - 1.0)).sqrt();
    assert!((s.variance - rca.sigma2_beta).abs() < 5.0 * se_var);
}

#[test]
fn demand_is_stationary_across_seeds() {
    let target = Eip1559Params::default().target;
    let mut rejected = 0;
    for seed in 0..100 {
        let s = gen_demand(&DemandModel::default(), 10_000, target, &RandomSource::new(seed, 1)).unwrap();
        if adf_test(&s, &AdfOptions::default()).unwrap().pvalue < 0.01 {
            rejected += 1;
        }
    }
    assert!(rejected >= 99, "{rejected}");
}

#[test]
fn basefee_paths_are_not_stationary_across_seeds() {
    let params = Eip1559Params::default();
    let mut kept = 0;
    for seed in 0..10 {
        let d = gen_demand(&DemandModel::default(), 100_000, params.target, &RandomSource::new(seed, 0)).unwrap();
        let path = simulate_basefees(&params, &d).unwrap();
        let series = path.basefees;
        if adf_test(&series, &AdfOptions::default()).unwrap().pvalue > 0.05 {
            kept += 1;
        }
    }
    assert!(kept >= 9, "{kept}");
}

#[test]
fn criterion_agrees_with_lyapunov_sign_far_from_boundary() {
    // Sufficient condition: satisfied must imply a negative top Lyapunov exponent.
    for (mu, s2) in [(0.2, 0.1), (0.5, 0.3), (-0.4, 0.2), (0.9, 0.01)] {
        let v = wang_classify(mu, s2, 1e-10).unwrap();
        assert!(v.satisfied, "({mu}, {s2})");
        let p = Rca1Params { alpha: 0.0, mu_beta: mu, sigma2_beta: s2, sigma2_eps: 1.0, x0: 0.0 };
        let est = mc_log_coefficient(&p, 200_000, &RandomSource::new(3, 0)).unwrap();
        assert!(est.mean < 0.0, "({mu}, {s2}) -> {}", est.mean);
    }
    for (mu, s2) in [(1.5, 0.1), (-2.0, 0.5), (0.2, 10.0)] {
        let v = wang_classify(mu, s2, 1e-10).unwrap();
        assert!(!v.satisfied, "({mu}, {s2})");
        let p = Rca1Params { alpha: 0.0, mu_beta: mu, sigma2_beta: s2, sigma2_eps: 1.0, x0: 0.0 };
        let est = mc_log_coefficient(&p, 200_000, &RandomSource::new(3, 0)).unwrap();
        assert!(est.mean > 0.0, "({mu}, {s2}) -> {}", est.mean);
    }
}
