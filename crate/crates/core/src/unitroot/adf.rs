use serde::{Deserialize, Serialize};

use super::mackinnon::{critical_values, mackinnon_pvalue, CriticalValues, RegressionKind};
use super::ols::{aic, nested_rss, ols_fit, Design};
use crate::error::{Error, Result};
use crate::series::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LagSelection {
    /// Use exactly `max_lags` lagged differences.
    Fixed,
    /// Minimize AIC over 0..=max_lags on a common sample.
    #[default]
    Aic,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct AdfOptions {
    /// Defaults to Schwert's rule `floor(12·(n/100)^{1/4})`.
    pub max_lags: Option<usize>,
    pub lag_selection: LagSelection,
    pub regression: RegressionKind,
}

/// Series must have at least this many observations beyond `max_lags`.
pub const MIN_ADF_EXTRA_OBS: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdfResult {
    /// t-ratio on the lagged level.
    pub statistic: f64,
    pub pvalue: f64,
    pub used_lags: usize,
    pub nobs: usize,
    pub critical_values: CriticalValues,
    pub regression: RegressionKind,
}

impl AdfResult {
    /// Whether the unit-root null is rejected at `level`.
    pub fn rejects(&self, level: f64) -> bool {
        self.pvalue < level
    }

    /// `stationary` / `not stationary` at the 5% level.
    pub fn outcome(&self) -> &'static str {
        if self.rejects(0.05) {
            "stationary"
        } else {
            "not stationary"
        }
    }
}

pub fn schwert_max_lags(n: usize) -> usize {
    (12.0 * (n as f64 / 100.0).powf(0.25)).floor() as usize
}

/// Regressors for Δy_t = [c +] γ y_{t−1} + Σ_{i=1..lags} θ_i Δy_{t−i}, using
/// the last `rows` observations of the differenced series. Column order:
/// constant (if `constant_first`), level, lags, constant (otherwise).
fn adf_design(
    levels: &[f64],
    diffs: &[f64],
    lags: usize,
    rows: usize,
    kind: RegressionKind,
    constant_first: bool,
) -> (Design, Vec<f64>) {
    let start = diffs.len() - rows;
    let with_const = kind == RegressionKind::Constant;
    let mut design = Design::with_capacity(rows, lags + 2);
    if with_const && constant_first {
        design.push_column(std::iter::repeat_n(1.0, rows));
    }
    design.push_column(levels[start..start + rows].iter().copied());
    for i in 1..=lags {
        design.push_column(diffs[start - i..start - i + rows].iter().copied());
    }
    if with_const && !constant_first {
        design.push_column(std::iter::repeat_n(1.0, rows));
    }
    (design, diffs[start..].to_vec())
}

/// Augmented Dickey-Fuller test of the unit-root null.
pub fn adf_test(series: &TimeSeries, options: &AdfOptions) -> Result<AdfResult> {
    let y = series.values();
    let n = y.len();
    let kind = options.regression;
    let ntrend = kind.deterministic_terms();

    let max_lags = match options.max_lags {
        Some(l) => l,
        None => schwert_max_lags(n).min((n / 2).saturating_sub(ntrend + 1)),
    };
    // rows of the max-lag regression must exceed its parameter count
    let needed = (MIN_ADF_EXTRA_OBS + max_lags).max(2 * max_lags + ntrend + 3);
    if n < needed {
        return Err(Error::InsufficientData { needed, got: n });
    }
    if y.iter().all(|v| *v == y[0]) {
        return Err(Error::DegenerateSeries);
    }

    let diffs: Vec<f64> = y.windows(2).map(|w| w[1] - w[0]).collect();
    let levels = &y[..n - 1];

    let used_lags = match options.lag_selection {
        LagSelection::Fixed => max_lags,
        LagSelection::Aic => {
            let rows = diffs.len() - max_lags;
            let (design, response) = adf_design(levels, &diffs, max_lags, rows, kind, true);
            let rss = nested_rss(&design, &response)?;
            // model with p lags uses the first ntrend + 1 + p columns
            (0..=max_lags)
                .map(|p| {
                    let k = ntrend + 1 + p;
                    (p, aic(rss[k - 1], rows, k))
                })
                .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
                .0
        }
    };

    let rows = diffs.len() - used_lags;
    let (design, response) = adf_design(levels, &diffs, used_lags, rows, kind, false);
    let fit = ols_fit(&design, &response)?;
    let statistic = fit.t_value(0);
    if !statistic.is_finite() {
        return Err(Error::DegenerateSeries);
    }

    Ok(AdfResult {
        statistic,
        pvalue: mackinnon_pvalue(statistic, kind, rows)?,
        used_lags,
        nobs: rows,
        critical_values: critical_values(kind, rows),
        regression: kind,
    })
}
