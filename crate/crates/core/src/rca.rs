//! AR(1) and RCA(1) processes and the base-fee → RCA(1) correspondence.
//!
//! AR(1): `x_t = μ + α (x_{t−1} − μ) + ε_t`, ε iid N(0, σ²).
//! RCA(1): `x_t = α + β_t x_{t−1} + ε_t`, β iid N(μ_β, σ_β²), ε iid N(0, σ²).
//!
//! Innovations always come from the [`NOISE_LANE`] of the supplied source and
//! coefficients from the [`COEFFICIENT_LANE`], so an RCA(1) with σ_β² = 0
//! reproduces the matching AR(1) path bit for bit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feesim::Eip1559Params;
use crate::random::{standard_normal, RandomSource, COEFFICIENT_LANE, NOISE_LANE};
use crate::series::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ar1Params {
    pub mu: f64,
    pub alpha: f64,
    /// Innovation standard deviation.
    pub sigma: f64,
    pub x0: f64,
}

impl Ar1Params {
    /// Intercept of the equivalent `c + α x_{t−1}` form.
    pub fn intercept(&self) -> f64 {
        self.mu * (1.0 - self.alpha)
    }

    /// The RCA(1) with a degenerate coefficient that generates the same path.
    pub fn as_rca1(&self) -> Rca1Params {
        Rca1Params {
            alpha: self.intercept(),
            mu_beta: self.alpha,
            sigma2_beta: 0.0,
            sigma2_eps: self.sigma * self.sigma,
            x0: self.x0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rca1Params {
    /// Intercept.
    pub alpha: f64,
    pub mu_beta: f64,
    pub sigma2_beta: f64,
    pub sigma2_eps: f64,
    pub x0: f64,
}

impl Rca1Params {
    fn validate(&self) -> Result<()> {
        if !(self.sigma2_beta >= 0.0 && self.sigma2_eps >= 0.0) {
            return Err(Error::domain(format!(
                "RCA(1) variances must be non-negative (sigma2_beta={}, sigma2_eps={})",
                self.sigma2_beta, self.sigma2_eps
            )));
        }
        Ok(())
    }
}

pub fn simulate_ar1(params: &Ar1Params, n: usize, rng: &RandomSource) -> Result<TimeSeries> {
    if !(params.sigma >= 0.0) {
        return Err(Error::domain(format!("sigma must be >= 0, got {}", params.sigma)));
    }
    if n == 0 {
        return Err(Error::domain("AR(1) path length must be at least 1"));
    }
    let c = params.intercept();
    let mut noise = rng.lane(NOISE_LANE).rng();
    let mut x = params.x0;
    let mut path = Vec::with_capacity(n);
    for _ in 0..n {
        x = c + params.alpha * x + params.sigma * standard_normal(&mut noise);
        path.push(x);
    }
    TimeSeries::new("ar1", 1, path)
}

/// An RCA(1) path together with the draws that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct RcaTrace {
    pub path: TimeSeries,
    pub coefficients: Vec<f64>,
    pub innovations: Vec<f64>,
}

pub fn simulate_rca1(params: &Rca1Params, n: usize, rng: &RandomSource) -> Result<TimeSeries> {
    simulate_rca1_traced(params, n, rng).map(|t| t.path)
}

pub fn simulate_rca1_traced(params: &Rca1Params, n: usize, rng: &RandomSource) -> Result<RcaTrace> {
    params.validate()?;
    if n == 0 {
        return Err(Error::domain("RCA(1) path length must be at least 1"));
    }
    let sd_beta = params.sigma2_beta.sqrt();
    let sd_eps = params.sigma2_eps.sqrt();
    let mut coef_rng = rng.lane(COEFFICIENT_LANE).rng();
    let mut noise_rng = rng.lane(NOISE_LANE).rng();

    let mut path = Vec::with_capacity(n);
    let mut coefficients = Vec::with_capacity(n);
    let mut innovations = Vec::with_capacity(n);
    let mut x = params.x0;
    for t in 0..n {
        let beta = params.mu_beta + sd_beta * standard_normal(&mut coef_rng);
        let eps = sd_eps * standard_normal(&mut noise_rng);
        x = params.alpha + beta * x + eps;
        if !x.is_finite() {
            return Err(Error::NumericOverflow { block: t + 1 });
        }
        path.push(x);
        coefficients.push(beta);
        innovations.push(eps);
    }
    Ok(RcaTrace {
        path: TimeSeries::new("rca1", 1, path)?,
        coefficients,
        innovations,
    })
}

/// Stationary distribution N(μ, σ²/(1−α²)) of a stable AR(1), as (mean, variance).
pub fn ar1_asymptotic(params: &Ar1Params) -> Result<(f64, f64)> {
    if params.alpha.abs() >= 1.0 {
        return Err(Error::NotStationary(params.alpha.abs()));
    }
    if params.sigma == 0.0 {
        return Err(Error::DegenerateDistribution);
    }
    if !(params.sigma > 0.0) {
        return Err(Error::domain(format!("sigma must be > 0, got {}", params.sigma)));
    }
    let s2 = params.sigma * params.sigma;
    Ok((params.mu, s2 / (1.0 - params.alpha * params.alpha)))
}

/// Maps the base-fee recursion with N(μ_d, σ_d²) demand onto RCA(1):
/// `β_k = f_k = 1 + (d_k − target)/c`, no intercept and no additive noise.
pub fn eip1559_to_rca(
    params: &Eip1559Params,
    demand_mu: f64,
    demand_sigma2: f64,
) -> Result<Rca1Params> {
    params.validate()?;
    if !(demand_sigma2 >= 0.0) {
        return Err(Error::domain(format!(
            "demand variance must be >= 0, got {demand_sigma2}"
        )));
    }
    let c = params.scale();
    Ok(Rca1Params {
        alpha: 0.0,
        mu_beta: 1.0 + (demand_mu - params.target) / c,
        sigma2_beta: demand_sigma2 / (c * c),
        sigma2_eps: 0.0,
        x0: params.initial_basefee,
    })
}

/// Monte Carlo estimate of E ln|β|.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LyapunovEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub draws: usize,
}

impl LyapunovEstimate {
    /// Negative exponents indicate a contracting recursion.
    pub fn is_contracting(&self) -> bool {
        self.mean < 0.0
    }
}

pub const MIN_LYAPUNOV_DRAWS: usize = 10_000;

pub fn mc_log_coefficient(
    params: &Rca1Params,
    n: usize,
    rng: &RandomSource,
) -> Result<LyapunovEstimate> {
    params.validate()?;
    if n < MIN_LYAPUNOV_DRAWS {
        return Err(Error::InsufficientData {
            needed: MIN_LYAPUNOV_DRAWS,
            got: n,
        });
    }
    if params.sigma2_beta == 0.0 && params.mu_beta == 0.0 {
        return Err(Error::domain("coefficient is identically zero"));
    }
    let sd = params.sigma2_beta.sqrt();
    let mut gen = rng.lane(COEFFICIENT_LANE).rng();
    let logs: Vec<f64> = (0..n)
        .map(|_| loop {
            let beta = params.mu_beta + sd * standard_normal(&mut gen);
            if beta != 0.0 {
                break beta.abs().ln();
            }
        })
        .collect();
    let m = crate::stats::moments(&logs);
    Ok(LyapunovEstimate {
        mean: m.mean,
        std_error: (m.variance / n as f64).sqrt(),
        draws: n,
    })
}
