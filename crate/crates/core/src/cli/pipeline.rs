//! Experiment runner: each experiment writes plot-ready CSV/JSON plus a
//! `manifest.json` holding the resolved config and SHA-256 of every artifact.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::config::{Experiment, ExperimentConfig};
use crate::demand::{eda_report, gen_demand};
use crate::error::{Error, Result};
use crate::feesim::{simulate_basefees, BasefeePath};
use crate::random::RandomSource;
use crate::rca::{eip1559_to_rca, mc_log_coefficient, LyapunovEstimate, Rca1Params};
use crate::series::format_real;
use crate::stationarity::{boundary_csv, boundary_curve, region_grid, wang_classify, StationarityVerdict};
use crate::unitroot::{adf_test, AdfResult};

pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub config: ExperimentConfig,
    /// File name → hex SHA-256.
    pub artifacts: BTreeMap<String, String>,
}

/// Writes `bytes` to `dir/name` via a temporary file and rename.
pub fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<()> {
    let path = dir.join(name);
    let tmp = dir.join(format!(".{name}.tmp"));
    fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, &path).map_err(|e| Error::io(&path, e))
}

struct Outputs {
    dir: PathBuf,
    artifacts: BTreeMap<String, String>,
}

impl Outputs {
    fn put(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        write_atomic(&self.dir, name, bytes)?;
        self.artifacts
            .insert(name.to_string(), hex::encode(Sha256::digest(bytes)));
        Ok(())
    }

    fn put_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value).expect("serializable");
        text.push('\n');
        self.put(name, text.as_bytes())
    }
}

fn simulate(config: &ExperimentConfig, sim: u64) -> Result<BasefeePath> {
    let rng = RandomSource::new(config.seed, sim);
    let demand = gen_demand(&config.demand, config.n_blocks, config.params.target, &rng)?;
    simulate_basefees(&config.params, &demand)
}

/// One row of the ADF summary table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TableRow {
    pub simulation: usize,
    pub adf: AdfResult,
}

/// ADF on the base-fee path of each simulation; row i uses stream i.
pub fn table2_rows(config: &ExperimentConfig) -> Result<Vec<TableRow>> {
    (0..config.n_sims)
        .map(|i| {
            let path = simulate(config, i as u64)?;
            Ok(TableRow {
                simulation: i + 1,
                adf: adf_test(&path.basefees, &config.adf)?,
            })
        })
        .collect()
}

pub fn table2_csv(rows: &[TableRow]) -> String {
    let mut out = String::from("simulation,adf_statistic,p_value,outcome\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.simulation,
            format_real(r.adf.statistic),
            format_real(r.adf.pvalue),
            r.adf.outcome()
        );
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct SetupVerdict {
    pub rca: Option<Rca1Params>,
    pub verdict: StationarityVerdict,
    pub lyapunov: Option<LyapunovEstimate>,
}

/// Classifies the configured setup point, by default the RCA(1) image of
/// the base-fee recursion under the configured demand.
pub fn setup_verdict(config: &ExperimentConfig) -> Result<SetupVerdict> {
    let (rca, point) = match config.setup_point {
        Some(p) => (None, p),
        None => {
            let (mu, sigma2) = config.demand.moments();
            let rca = eip1559_to_rca(&config.params, mu, sigma2)?;
            (Some(rca), (rca.mu_beta, rca.sigma2_beta))
        }
    };
    let verdict = wang_classify(point.0, point.1, config.tol)?;
    let coefficient = rca.unwrap_or(Rca1Params {
        alpha: 0.0,
        mu_beta: point.0,
        sigma2_beta: point.1,
        sigma2_eps: 0.0,
        x0: 0.0,
    });
    let lyapunov = if config.lyapunov_draws > 0 {
        Some(mc_log_coefficient(
            &coefficient,
            config.lyapunov_draws,
            &RandomSource::new(config.seed, 0),
        )?)
    } else {
        None
    };
    Ok(SetupVerdict {
        rca,
        verdict,
        lyapunov,
    })
}

/// Runs the configured experiment and returns its manifest.
pub fn run_pipeline(config: &ExperimentConfig) -> Result<Manifest> {
    config.validate()?;
    let dir = config.output_dir.clone();
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let mut out = Outputs {
        dir,
        artifacts: BTreeMap::new(),
    };

    match config.experiment {
        Experiment::DemandEda => {
            let rng = RandomSource::new(config.seed, 0);
            let demand = gen_demand(&config.demand, config.n_blocks, config.params.target, &rng)?;
            out.put("demand.csv", demand.to_csv().as_bytes())?;
            out.put_json("eda.json", &eda_report(&demand, config.eda_bins)?)?;
            out.put_json("adf.json", &adf_test(&demand, &config.adf)?)?;
        }
        Experiment::BasefeeRuns => {
            for i in 0..config.n_sims {
                let path = simulate(config, i as u64)?;
                out.put(&format!("basefee_{:03}.csv", i + 1), path.to_csv().as_bytes())?;
            }
        }
        Experiment::Table2 => {
            let rows = table2_rows(config)?;
            out.put("table2.csv", table2_csv(&rows).as_bytes())?;
        }
        Experiment::Fig4 => {
            let b = config.boundary;
            let grid: Vec<f64> = (0..b.points)
                .map(|i| match b.points {
                    1 => 0.0,
                    n => b.lambda_max * (i as f64 / (n - 1) as f64).powi(2),
                })
                .collect();
            let curve = boundary_curve(&grid, config.tol)?;
            out.put("boundary.csv", boundary_csv(&curve).as_bytes())?;
            let setup = setup_verdict(config)?;
            let highlight = (setup.verdict.mu_beta, setup.verdict.sigma2_beta);
            let region = region_grid(&config.region, config.tol, Some(highlight))?;
            out.put("region.csv", region.to_csv().as_bytes())?;
            out.put_json("verdict.json", &setup)?;
        }
        Experiment::Classify => {
            out.put_json("verdict.json", &setup_verdict(config)?)?;
        }
    }

    let manifest = Manifest {
        config: config.clone(),
        artifacts: out.artifacts.clone(),
    };
    let mut text = serde_json::to_string_pretty(&manifest).expect("serializable");
    text.push('\n');
    write_atomic(&out.dir, MANIFEST, text.as_bytes())?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(experiment: Experiment, dir: &Path) -> ExperimentConfig {
        ExperimentConfig {
            n_blocks: 2_000,
            n_sims: 3,
            seed: 5,
            output_dir: dir.to_path_buf(),
            ..ExperimentConfig::new(experiment)
        }
    }

    #[test]
    fn basefee_runs_write_one_file_per_sim() {
        let dir = tempfile::tempdir().unwrap();
        let m = run_pipeline(&config(Experiment::BasefeeRuns, dir.path())).unwrap();
        let names: Vec<_> = m.artifacts.keys().cloned().collect();
        assert_eq!(names, ["basefee_001.csv", "basefee_002.csv", "basefee_003.csv"]);
        let text = fs::read_to_string(dir.path().join("basefee_002.csv")).unwrap();
        assert_eq!(text.lines().count(), 2_002);
        assert!(dir.path().join(MANIFEST).exists());
        assert!(!dir.path().join(".basefee_001.csv.tmp").exists());
    }

    #[test]
    fn overflow_surfaces_as_numeric_error() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = config(Experiment::Table2, dir.path());
        c.n_blocks = 500_000;
        let err = run_pipeline(&c).unwrap_err();
        assert!(matches!(err, Error::NumericOverflow { .. }));
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn unwritable_output_is_io_error() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("occupied");
        fs::write(&file, "x").unwrap();
        let err = run_pipeline(&config(Experiment::Classify, &file)).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn table_layout() {
        let dir = tempfile::tempdir().unwrap();
        run_pipeline(&config(Experiment::Table2, dir.path())).unwrap();
        let text = fs::read_to_string(dir.path().join("table2.csv")).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("simulation,adf_statistic,p_value,outcome"));
        assert_eq!(lines.count(), 3);
    }
}
