//! Wang's sufficient condition for a strictly stationary, ergodic RCA(1)
//! solution when the coefficient and innovation are normal:
//!
//! ```text
//! ln σ_β² < γ + ln 2 − 2 I(λ),   I(λ) = ∫₀¹ (1 − e^{−λ(1−w²)}) / (1−w²) dw,   λ = μ_β² / (2σ_β²)
//! ```
//!
//! The integrand has a removable singularity at w = 1 (limit λ). We integrate
//! in t = 1 − w so that the boundary layer of width ~1/λ near w = 1 is
//! represented with full relative precision, and seed the adaptive rule with
//! log-spaced breakpoints across that layer.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;
use crate::series::format_real;

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Default relative tolerance for [`wang_integral`].
pub const DEFAULT_TOL: f64 = 1e-10;

const MIN_TOL: f64 = 1e-14;
const MAX_TOL: f64 = 1e-6;
const MAX_SEGMENTS: usize = 4096;

/// Threshold γ + ln 2 that the right-hand side reaches at λ = 0.
pub fn threshold() -> f64 {
    EULER_GAMMA + std::f64::consts::LN_2
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WangInputs {
    pub mu_beta: f64,
    pub sigma2_beta: f64,
    pub lambda: f64,
}

impl WangInputs {
    pub fn new(mu_beta: f64, sigma2_beta: f64) -> Result<Self> {
        if !(sigma2_beta > 0.0 && sigma2_beta.is_finite()) || !mu_beta.is_finite() {
            return Err(Error::domain(format!(
                "criterion needs finite mu_beta and sigma2_beta > 0 (got {mu_beta}, {sigma2_beta})"
            )));
        }
        Ok(Self {
            mu_beta,
            sigma2_beta,
            lambda: mu_beta * mu_beta / (2.0 * sigma2_beta),
        })
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if !(MIN_TOL..=MAX_TOL).contains(&tol) {
        return Err(Error::domain(format!(
            "tolerance must lie in [{MIN_TOL:e}, {MAX_TOL:e}], got {tol}"
        )));
    }
    Ok(())
}

/// I(λ) to relative accuracy `tol`.
pub fn wang_integral(lambda: f64, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    if !(lambda >= 0.0) || lambda.is_infinite() {
        return Err(Error::domain(format!("lambda must be finite and >= 0, got {lambda}")));
    }
    if lambda == 0.0 {
        return Ok(0.0);
    }
    let integrand = |t: f64| {
        let u = t * (2.0 - t);
        if u == 0.0 {
            lambda
        } else {
            -(-lambda * u).exp_m1() / u
        }
    };

    let mut points = vec![0.0];
    if lambda > 1.0 {
        let mut p = 1.0 / lambda;
        while p < 0.5 {
            points.push(p);
            p *= 8.0;
        }
    }
    points.push(1.0);

    // Aim a little tighter than asked: the estimate bounds the error loosely.
    let q = quadrature::integrate(integrand, &points, 0.5 * tol, MAX_SEGMENTS);
    Ok(q.value)
}

/// Outcome of the criterion at one (μ_β, σ_β²).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationarityVerdict {
    pub mu_beta: f64,
    pub sigma2_beta: f64,
    pub lambda: f64,
    /// ln σ_β²
    pub lhs: f64,
    /// γ + ln 2 − 2 I(λ)
    pub rhs: f64,
    pub satisfied: bool,
    /// rhs − lhs
    pub margin: f64,
}

pub fn wang_classify(mu_beta: f64, sigma2_beta: f64, tol: f64) -> Result<StationarityVerdict> {
    let inputs = WangInputs::new(mu_beta, sigma2_beta)?;
    let integral = wang_integral(inputs.lambda, tol)?;
    let lhs = sigma2_beta.ln();
    let rhs = threshold() - 2.0 * integral;
    let margin = rhs - lhs;
    Ok(StationarityVerdict {
        mu_beta,
        sigma2_beta,
        lambda: inputs.lambda,
        lhs,
        rhs,
        satisfied: margin > 0.0,
        margin,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub lambda: f64,
    pub mu_beta: f64,
    pub sigma2_beta: f64,
}

/// Points where the criterion holds with equality, one per λ (μ_β ≥ 0 branch;
/// the curve is symmetric under μ_β ↦ −μ_β).
pub fn boundary_curve(lambda_grid: &[f64], tol: f64) -> Result<Vec<BoundaryPoint>> {
    lambda_grid
        .iter()
        .map(|&lambda| {
            let sigma2_beta = (threshold() - 2.0 * wang_integral(lambda, tol)?).exp();
            Ok(BoundaryPoint {
                lambda,
                mu_beta: (2.0 * lambda * sigma2_beta).sqrt(),
                sigma2_beta,
            })
        })
        .collect()
}

pub fn boundary_csv(points: &[BoundaryPoint]) -> String {
    let mut out = String::from("lambda,mu_beta,sigma2_beta\n");
    for p in points {
        let _ = writeln!(
            out,
            "{},{},{}",
            format_real(p.lambda),
            format_real(p.mu_beta),
            format_real(p.sigma2_beta)
        );
    }
    out
}

/// Axes of a classification grid. Both axes include their end points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionSpec {
    pub mu_range: (f64, f64),
    pub sigma2_range: (f64, f64),
    pub mu_points: usize,
    pub sigma2_points: usize,
}

impl Default for RegionSpec {
    fn default() -> Self {
        Self {
            mu_range: (-3.0, 3.0),
            sigma2_range: (5.0 / 400.0, 5.0),
            mu_points: 400,
            sigma2_points: 400,
        }
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionGrid {
    pub mu_values: Vec<f64>,
    pub sigma2_values: Vec<f64>,
    /// Row-major over μ_β, then σ_β².
    pub cells: Vec<StationarityVerdict>,
    pub highlight: Option<StationarityVerdict>,
}

impl RegionGrid {
    pub fn cell(&self, mu_index: usize, sigma2_index: usize) -> &StationarityVerdict {
        &self.cells[mu_index * self.sigma2_values.len() + sigma2_index]
    }

    /// CSV with header `mu_beta,sigma2_beta,lhs,rhs,satisfied`.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(96 * (self.cells.len() + 1));
        out.push_str("mu_beta,sigma2_beta,lhs,rhs,satisfied\n");
        for c in &self.cells {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                format_real(c.mu_beta),
                format_real(c.sigma2_beta),
                format_real(c.lhs),
                format_real(c.rhs),
                c.satisfied
            );
        }
        out
    }
}

/// Classifies every cell of `spec`, plus an optional highlighted point.
pub fn region_grid(spec: &RegionSpec, tol: f64, highlight: Option<(f64, f64)>) -> Result<RegionGrid> {
    let (s_lo, s_hi) = spec.sigma2_range;
    let (m_lo, m_hi) = spec.mu_range;
    if spec.mu_points == 0 || spec.sigma2_points == 0 {
        return Err(Error::domain("grid resolution must be positive"));
    }
    if !(s_lo > 0.0 && s_hi >= s_lo && m_hi >= m_lo) {
        return Err(Error::domain(format!(
            "invalid grid ranges: mu {:?}, sigma2 {:?}",
            spec.mu_range, spec.sigma2_range
        )));
    }
    let mu_values = linspace(m_lo, m_hi, spec.mu_points);
    let sigma2_values = linspace(s_lo, s_hi, spec.sigma2_points);
    let mut cells = Vec::with_capacity(mu_values.len() * sigma2_values.len());
    for &mu in &mu_values {
        for &s2 in &sigma2_values {
            cells.push(wang_classify(mu, s2, tol)?);
        }
    }
    let highlight = highlight
        .map(|(mu, s2)| wang_classify(mu, s2, tol))
        .transpose()?;
    Ok(RegionGrid {
        mu_values,
        sigma2_values,
        cells,
        highlight,
    })
}
