use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::demand::DemandModel;
use crate::error::{Error, Result};
use crate::feesim::Eip1559Params;
use crate::stationarity::{RegionSpec, DEFAULT_TOL};
use crate::unitroot::AdfOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    DemandEda,
    BasefeeRuns,
    Table2,
    Fig4,
    Classify,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundarySpec {
    pub lambda_max: f64,
    pub points: usize,
}

impl Default for BoundarySpec {
    fn default() -> Self {
        Self {
            lambda_max: 50.0,
            points: 400,
        }
    }
}

fn default_n_blocks() -> usize {
    100_000
}
fn default_n_sims() -> usize {
    10
}
fn default_bins() -> usize {
    50
}
fn default_tol() -> f64 {
    DEFAULT_TOL
}
fn default_lyapunov_draws() -> usize {
    100_000
}
fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

/// One experiment run, loaded from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(default)]
    pub params: Eip1559Params,
    #[serde(default)]
    pub demand: DemandModel,
    #[serde(default = "default_n_blocks")]
    pub n_blocks: usize,
    #[serde(default = "default_n_sims")]
    pub n_sims: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub adf: AdfOptions,
    #[serde(default = "default_bins")]
    pub eda_bins: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub region: RegionSpec,
    #[serde(default)]
    pub boundary: BoundarySpec,
    /// (μ_β, σ_β²) to classify; derived from `params` and `demand` when absent.
    #[serde(default)]
    pub setup_point: Option<(f64, f64)>,
    #[serde(default = "default_lyapunov_draws")]
    pub lyapunov_draws: usize,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            params: Eip1559Params::default(),
            demand: DemandModel::default(),
            n_blocks: default_n_blocks(),
            n_sims: default_n_sims(),
            seed: 0,
            output_dir: default_output_dir(),
            adf: AdfOptions::default(),
            eda_bins: default_bins(),
            tol: DEFAULT_TOL,
            region: RegionSpec::default(),
            boundary: BoundarySpec::default(),
            setup_point: None,
            lyapunov_draws: default_lyapunov_draws(),
        }
    }

    /// Parses either a bare config or a `manifest.json` (its `config` field).
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("invalid JSON: {e}")))?;
        let config = match value.get("config") {
            Some(inner) if value.get("artifacts").is_some() => inner.clone(),
            _ => value,
        };
        let config: Self = serde_json::from_value(config).map_err(|e| {
            // value-level errors lose positions; re-parse the text for line/column
            match serde_json::from_str::<Self>(text) {
                Err(pos) if pos.line() > 0 => Error::Config(pos.to_string()),
                _ => Error::Config(e.to_string()),
            }
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.n_blocks == 0 {
            return bad("n_blocks must be >= 1".into());
        }
        if self.n_sims == 0 {
            return bad("n_sims must be >= 1".into());
        }
        if self.eda_bins == 0 {
            return bad("eda_bins must be >= 1".into());
        }
        if self.boundary.points == 0 || !(self.boundary.lambda_max >= 0.0) {
            return bad("boundary needs points >= 1 and lambda_max >= 0".into());
        }
        self.params
            .validate()
            .and_then(|_| self.demand.validate())
            .map_err(|e| Error::Config(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_uses_defaults() {
        let c = ExperimentConfig::from_json(r#"{"experiment": "table2", "seed": 7}"#).unwrap();
        assert_eq!(c.n_sims, 10);
        assert_eq!(c.n_blocks, 100_000);
        assert_eq!(c.params, Eip1559Params::default());
        assert_eq!(c.seed, 7);
    }

    #[test]
    fn errors_carry_position() {
        let err = ExperimentConfig::from_json("{\n  \"experiment\": \"table2\",\n  \"n_blokcs\": 5\n}")
            .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("n_blokcs") && msg.contains("line 3"), "{msg}");
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn invalid_values_rejected() {
        for text in [
            r#"{"experiment": "table2", "n_sims": 0}"#,
            r#"{"experiment": "fig4", "params": {"target": -1}}"#,
            r#"{"experiment": "demand_eda", "demand": {"kind": "poisson_tx", "rate": 1, "gas_per_tx": 0}}"#,
            r#"{"experiment": "nope"}"#,
        ] {
            assert!(matches!(ExperimentConfig::from_json(text), Err(Error::Config(_))), "{text}");
        }
    }

    #[test]
    fn manifest_wrapper_accepted() {
        let c = ExperimentConfig::new(Experiment::Classify);
        let manifest = serde_json::json!({"config": c, "artifacts": {}});
        let back = ExperimentConfig::from_json(&manifest.to_string()).unwrap();
        assert_eq!(back, c);
    }
}
