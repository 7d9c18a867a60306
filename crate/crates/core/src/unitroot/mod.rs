//! Unit-root testing: least squares, MacKinnon p-values and the augmented
//! Dickey-Fuller test.

mod adf;
mod mackinnon;
mod ols;

pub use adf::{adf_test, schwert_max_lags, AdfOptions, AdfResult, LagSelection, MIN_ADF_EXTRA_OBS};
pub use mackinnon::{critical_values, mackinnon_pvalue, CriticalValues, RegressionKind};
pub use ols::{aic, nested_rss, ols_fit, Design, OlsFit};
