//! Gas-demand generators and normality diagnostics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::random::{self, RandomSource};
use crate::series::TimeSeries;
use crate::stats::{moments, normal_inv_cdf, summary_stats};

/// Gas consumed by a plain value transfer.
pub const GAS_PER_TRANSFER: f64 = 21_000.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DemandModel {
    /// iid N(mu, sigma2) gas per block, optionally clamped to [0, 2·target].
    NormalIid { mu: f64, sigma2: f64, clamp: bool },
    /// Poisson transaction arrivals, each consuming `gas_per_tx`.
    PoissonTx { rate: f64, gas_per_tx: f64 },
}

impl Default for DemandModel {
    fn default() -> Self {
        DemandModel::NormalIid {
            mu: 1.36e7,
            sigma2: 5.51e5,
            clamp: false,
        }
    }
}

impl DemandModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            DemandModel::NormalIid { mu, sigma2, .. } => {
                if !mu.is_finite() || !sigma2.is_finite() || sigma2 < 0.0 {
                    return Err(Error::domain(format!(
                        "normal demand needs finite mu and sigma2 >= 0 (mu={mu}, sigma2={sigma2})"
                    )));
                }
            }
            DemandModel::PoissonTx { rate, gas_per_tx } => {
                if !rate.is_finite() || rate < 0.0 {
                    return Err(Error::domain(format!("Poisson rate must be >= 0, got {rate}")));
                }
                if !gas_per_tx.is_finite() || gas_per_tx <= 0.0 {
                    return Err(Error::domain(format!(
                        "gas_per_tx must be > 0, got {gas_per_tx}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Mean and variance of per-block demand (ignoring clamping).
    pub fn moments(&self) -> (f64, f64) {
        match *self {
            DemandModel::NormalIid { mu, sigma2, .. } => (mu, sigma2),
            DemandModel::PoissonTx { rate, gas_per_tx } => {
                (rate * gas_per_tx, rate * gas_per_tx * gas_per_tx)
            }
        }
    }
}

/// Draws `n` blocks of gas demand.
pub fn gen_demand(
    model: &DemandModel,
    n: usize,
    target: f64,
    rng: &RandomSource,
) -> Result<TimeSeries> {
    model.validate()?;
    if n == 0 {
        return Err(Error::domain("demand length must be at least 1"));
    }
    let mut gen = rng.rng();
    let values: Vec<f64> = match *model {
        DemandModel::NormalIid { mu, sigma2, clamp } => {
            if clamp && !(target.is_finite() && target > 0.0) {
                return Err(Error::domain(format!(
                    "clamping needs a positive target, got {target}"
                )));
            }
            let sd = sigma2.sqrt();
            (0..n)
                .map(|_| {
                    let d = mu + sd * random::standard_normal(&mut gen);
                    if clamp {
                        d.clamp(0.0, 2.0 * target)
                    } else {
                        d
                    }
                })
                .collect()
        }
        DemandModel::PoissonTx { rate, gas_per_tx } => (0..n)
            .map(|_| gas_per_tx * random::poisson(&mut gen, rate) as f64)
            .collect(),
    };
    TimeSeries::new("demand", 0, values)
}

/// Excess demand δ_k = demand_k − target.
pub fn delta_series(demand: &TimeSeries, target: f64) -> Result<TimeSeries> {
    let values = demand.values().iter().map(|d| d - target).collect();
    TimeSeries::new("delta", demand.start_index(), values)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalFit {
    pub mu: f64,
    pub sigma2: f64,
}

/// Histogram, fitted normal and Q-Q points for a demand sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdaReport {
    /// `(left, right, count)` per bin.
    pub histogram: Vec<(f64, f64, u64)>,
    pub normal_fit: NormalFit,
    /// `(theoretical, sample)` quantile pairs.
    #[serde(rename = "qq")]
    pub qq_points: Vec<(f64, f64)>,
}

impl EdaReport {
    /// Least-squares slope of sample on theoretical quantiles.
    pub fn qq_slope(&self) -> f64 {
        let n = self.qq_points.len() as f64;
        let mx = self.qq_points.iter().map(|p| p.0).sum::<f64>() / n;
        let my = self.qq_points.iter().map(|p| p.1).sum::<f64>() / n;
        let (mut sxy, mut sxx) = (0.0, 0.0);
        for &(x, y) in &self.qq_points {
            sxy += (x - mx) * (y - my);
            sxx += (x - mx) * (x - mx);
        }
        sxy / sxx
    }
}

/// Equal-width histogram, normal fit and Hazen-position Q-Q points.
pub fn eda_report(series: &TimeSeries, bins: usize) -> Result<EdaReport> {
    if bins == 0 {
        return Err(Error::domain("histogram needs at least one bin"));
    }
    let summary = summary_stats(series)?;
    let histogram = histogram(series.values(), bins);

    let mut sorted = series.values().to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let sd = summary.std_dev();
    let qq_points = sorted
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let p = (i as f64 + 0.5) / n;
            normal_inv_cdf(p).map(|z| (summary.mean + sd * z, s))
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(EdaReport {
        histogram,
        normal_fit: NormalFit {
            mu: summary.mean,
            sigma2: summary.variance,
        },
        qq_points,
    })
}

fn histogram(values: &[f64], bins: usize) -> Vec<(f64, f64, u64)> {
    let m = moments(values);
    let (lo, hi) = (m.min, m.max);
    if lo == hi {
        return vec![(lo, lo + 1.0, values.len() as u64)];
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0u64; bins];
    for &v in values {
        let idx = (((v - lo) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            let left = lo + i as f64 * width;
            let right = if i + 1 == bins { hi } else { lo + (i + 1) as f64 * width };
            (left, right, c)
        })
        .collect()
}
