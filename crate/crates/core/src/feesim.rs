//! The EIP-1559 base-fee recursion `b_{k+1} = b_k · (1 + δ_k / c)`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{format_real, TimeSeries};

/// Protocol constants. Defaults are the 2021 replication setup: 12.5M gas
/// target, max-change divisor 50, and an initial base fee of 10 gwei.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Eip1559Params {
    /// Target gas per block.
    pub target: f64,
    /// Base fee max change denominator.
    pub max_change: f64,
    /// Base fee of block 0, in wei.
    pub initial_basefee: f64,
    /// Clamp demand to [0, 2·target] before computing δ.
    pub clamp_demand: bool,
}

impl Default for Eip1559Params {
    fn default() -> Self {
        Self {
            target: 12_500_000.0,
            max_change: 50.0,
            initial_basefee: 10_000_000_000.0,
            clamp_demand: false,
        }
    }
}

impl Eip1559Params {
    /// c = target · max_change.
    pub fn scale(&self) -> f64 {
        self.target * self.max_change
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !(ok(self.target) && ok(self.max_change) && ok(self.initial_basefee)) {
            return Err(Error::domain(format!(
                "target, max_change and initial_basefee must be positive and finite ({self:?})"
            )));
        }
        Ok(())
    }
}

/// Per-block multiplicative update `1 + δ / c`.
pub fn update_factor(delta: f64, params: &Eip1559Params) -> f64 {
    1.0 + delta / params.scale()
}

/// A simulated base-fee trajectory with the factors that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct BasefeePath {
    /// `b_0 … b_n`, wei.
    pub basefees: TimeSeries,
    /// `f_0 … f_{n−1}`.
    pub factors: TimeSeries,
}

impl BasefeePath {
    /// CSV with header `index,basefee,factor`; row k carries the factor that
    /// produced `b_k`, so row 0 has an empty factor.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(48 * (self.basefees.len() + 1));
        out.push_str("index,basefee,factor\n");
        for (k, b) in self.basefees.values().iter().enumerate() {
            let factor = match k {
                0 => String::new(),
                _ => format_real(self.factors[k - 1]),
            };
            let _ = writeln!(out, "{k},{},{factor}", format_real(*b));
        }
        out
    }
}

/// Runs the base-fee recursion over a demand series.
pub fn simulate_basefees(params: &Eip1559Params, demand: &TimeSeries) -> Result<BasefeePath> {
    params.validate()?;
    demand.require_len(1)?;

    let mut basefees = Vec::with_capacity(demand.len() + 1);
    let mut factors = Vec::with_capacity(demand.len());
    let mut b = params.initial_basefee;
    basefees.push(b);
    for (k, &d) in demand.values().iter().enumerate() {
        let d = if params.clamp_demand {
            d.clamp(0.0, 2.0 * params.target)
        } else {
            d
        };
        let f = update_factor(d - params.target, params);
        let next = b * f;
        if !next.is_finite() || (next == 0.0 && b != 0.0 && f != 0.0) {
            return Err(Error::NumericOverflow { block: k + 1 });
        }
        factors.push(f);
        basefees.push(next);
        b = next;
    }

    Ok(BasefeePath {
        basefees: TimeSeries::new("basefee", 0, basefees)?,
        factors: TimeSeries::new("factor", 0, factors)?,
    })
}
