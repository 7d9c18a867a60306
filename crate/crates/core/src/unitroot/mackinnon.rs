//! MacKinnon response-surface p-values and critical values for the
//! Dickey-Fuller τ statistic (single series).
//!
//! P-values follow MacKinnon (1994): Φ applied to a low-order polynomial in
//! the statistic, with separate fits for the left tail and the body, and
//! saturation outside the fitted range. Critical values follow MacKinnon
//! (2010): β∞ + β₁/T + β₂/T² + β₃/T³.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::normal_cdf;

/// Deterministic terms in the test regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegressionKind {
    None,
    #[default]
    Constant,
}

impl RegressionKind {
    pub fn deterministic_terms(self) -> usize {
        match self {
            RegressionKind::None => 0,
            RegressionKind::Constant => 1,
        }
    }
}

struct Surface {
    tau_max: f64,
    tau_min: f64,
    tau_star: f64,
    small_p: [f64; 3],
    large_p: [f64; 4],
    /// 1%, 5%, 10% rows of (β∞, β₁, β₂, β₃).
    critical: [[f64; 4]; 3],
}

const CONSTANT: Surface = Surface {
    tau_max: 2.74,
    tau_min: -18.83,
    tau_star: -1.61,
    small_p: [2.1659, 1.4412, 3.8269e-2],
    large_p: [1.7339, 9.3202e-1, -1.2745e-1, -1.0368e-2],
    critical: [
        [-3.43035, -6.5393, -16.786, -79.433],
        [-2.86154, -2.8903, -4.234, -40.040],
        [-2.56677, -1.5384, -2.809, 0.0],
    ],
};

const NO_CONSTANT: Surface = Surface {
    tau_max: 1.51,
    tau_min: -19.04,
    tau_star: -1.04,
    small_p: [0.6344, 1.2378, 3.2496e-2],
    large_p: [0.4797, 9.3557e-1, -6.999e-2, 3.3066e-2],
    critical: [
        [-2.56574, -2.2358, -3.627, 0.0],
        [-1.94100, -0.2686, -3.365, 31.223],
        [-1.61682, 0.2656, -2.714, 25.364],
    ],
};

fn surface(kind: RegressionKind) -> &'static Surface {
    match kind {
        RegressionKind::None => &NO_CONSTANT,
        RegressionKind::Constant => &CONSTANT,
    }
}

fn poly(coef: &[f64], x: f64) -> f64 {
    coef.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

const P_FLOOR: f64 = 1e-16;
pub const MIN_PVALUE_NOBS: usize = 20;

/// Approximate p-value of a Dickey-Fuller τ statistic, clipped to
/// [1e-16, 1 − 1e-16]. The surface is asymptotic; `nobs` only guards the
/// range where it is usable.
pub fn mackinnon_pvalue(statistic: f64, kind: RegressionKind, nobs: usize) -> Result<f64> {
    if nobs < MIN_PVALUE_NOBS {
        return Err(Error::InsufficientData {
            needed: MIN_PVALUE_NOBS,
            got: nobs,
        });
    }
    if statistic.is_nan() {
        return Err(Error::domain("ADF statistic is NaN"));
    }
    let s = surface(kind);
    let p = if statistic > s.tau_max {
        1.0
    } else if statistic < s.tau_min {
        0.0
    } else if statistic <= s.tau_star {
        normal_cdf(poly(&s.small_p, statistic))
    } else {
        normal_cdf(poly(&s.large_p, statistic))
    };
    Ok(p.clamp(P_FLOOR, 1.0 - P_FLOOR))
}

/// Finite-sample critical values at 1%, 5% and 10%.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalValues {
    #[serde(rename = "1%")]
    pub one: f64,
    #[serde(rename = "5%")]
    pub five: f64,
    #[serde(rename = "10%")]
    pub ten: f64,
}

pub fn critical_values(kind: RegressionKind, nobs: usize) -> CriticalValues {
    let s = surface(kind);
    let inv_t = 1.0 / nobs as f64;
    let cv = |row: &[f64; 4]| poly(row, inv_t);
    CriticalValues {
        one: cv(&s.critical[0]),
        five: cv(&s.critical[1]),
        ten: cv(&s.critical[2]),
    }
}
