use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use super::config::ExperimentConfig;
use super::pipeline::run_pipeline;
use crate::demand::{eda_report, gen_demand, DemandModel, GAS_PER_TRANSFER};
use crate::error::{Error, Result};
use crate::feesim::{simulate_basefees, Eip1559Params};
use crate::random::RandomSource;
use crate::rca::{simulate_ar1, simulate_rca1, Ar1Params, Rca1Params};
use crate::series::TimeSeries;
use crate::stationarity::{boundary_csv, boundary_curve, region_grid, wang_classify, RegionSpec, DEFAULT_TOL};
use crate::unitroot::{adf_test, AdfOptions, LagSelection, RegressionKind};

#[derive(Debug, Parser)]
#[command(name = "feestat", version, about = "EIP-1559 base-fee simulation and stationarity analysis")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a gas-demand series (CSV).
    Demand {
        #[command(flatten)]
        demand: DemandArgs,
        #[command(flatten)]
        rng: RngArgs,
        /// Also write the histogram / Q-Q report as JSON.
        #[arg(long)]
        eda: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        bins: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate a base-fee path (CSV) from generated or supplied demand.
    Basefee {
        #[command(flatten)]
        demand: DemandArgs,
        #[command(flatten)]
        rng: RngArgs,
        #[command(flatten)]
        params: FeeArgs,
        /// Read demand from an `index,value` CSV instead of generating it.
        #[arg(long)]
        demand_csv: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Augmented Dickey-Fuller test on an `index,value` CSV (JSON result).
    Adf {
        input: PathBuf,
        /// Series column when the CSV is a base-fee path.
        #[arg(long, value_enum, default_value_t = Column::Value)]
        column: Column,
        #[arg(long)]
        max_lags: Option<usize>,
        #[arg(long, value_enum, default_value_t = LagArg::Aic)]
        lag_selection: LagArg,
        #[arg(long, value_enum, default_value_t = RegressionArg::Constant)]
        regression: RegressionArg,
    },
    /// Simulate an AR(1) path (CSV).
    Ar1 {
        #[arg(long, default_value_t = 0.0)]
        mu: f64,
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        x0: f64,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[command(flatten)]
        rng: RngArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate an RCA(1) path (CSV).
    Rca1 {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        mu_beta: f64,
        #[arg(long)]
        sigma2_beta: f64,
        #[arg(long, default_value_t = 1.0)]
        sigma2_eps: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        x0: f64,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[command(flatten)]
        rng: RngArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify one (mu_beta, sigma2_beta) point (JSON verdict).
    Wang {
        #[arg(long, allow_hyphen_values = true)]
        mu_beta: f64,
        #[arg(long)]
        sigma2_beta: f64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Boundary of the stationarity region (CSV).
    Boundary {
        #[arg(long, default_value_t = 50.0)]
        lambda_max: f64,
        #[arg(long, default_value_t = 400)]
        points: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classification grid over (mu_beta, sigma2_beta) (CSV).
    Region {
        #[arg(long, default_value_t = -3.0, allow_hyphen_values = true)]
        mu_min: f64,
        #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
        mu_max: f64,
        #[arg(long, default_value_t = 0.0125)]
        sigma2_min: f64,
        #[arg(long, default_value_t = 5.0)]
        sigma2_max: f64,
        #[arg(long, default_value_t = 400)]
        resolution: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an experiment described by a JSON config or a previous manifest.
    Pipeline {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        n_blocks: Option<usize>,
        #[arg(long)]
        n_sims: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Column {
    Value,
    Basefee,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LagArg {
    Aic,
    Fixed,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RegressionArg {
    Constant,
    None,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelArg {
    Normal,
    Poisson,
}

#[derive(Debug, Args)]
struct DemandArgs {
    #[arg(long, value_enum, default_value_t = ModelArg::Normal)]
    model: ModelArg,
    #[arg(long, default_value_t = 1.36e7)]
    mu: f64,
    #[arg(long, default_value_t = 5.51e5)]
    sigma2: f64,
    /// Clamp normal demand to [0, 2·target].
    #[arg(long)]
    clamp: bool,
    #[arg(long, default_value_t = 647.62)]
    rate: f64,
    #[arg(long, default_value_t = GAS_PER_TRANSFER)]
    gas_per_tx: f64,
    /// Number of blocks.
    #[arg(long, default_value_t = 100_000)]
    n: usize,
    #[arg(long, default_value_t = 12_500_000.0)]
    target: f64,
}

impl DemandArgs {
    fn model(&self) -> DemandModel {
        match self.model {
            ModelArg::Normal => DemandModel::NormalIid {
                mu: self.mu,
                sigma2: self.sigma2,
                clamp: self.clamp,
            },
            ModelArg::Poisson => DemandModel::PoissonTx {
                rate: self.rate,
                gas_per_tx: self.gas_per_tx,
            },
        }
    }
}

#[derive(Debug, Args)]
struct RngArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    stream: u64,
}

impl RngArgs {
    fn source(&self) -> RandomSource {
        RandomSource::new(self.seed, self.stream)
    }
}

#[derive(Debug, Args)]
struct FeeArgs {
    #[arg(long, default_value_t = 50.0)]
    max_change: f64,
    #[arg(long, default_value_t = 1e10)]
    initial_basefee: f64,
    /// Clamp demand to [0, 2·target] inside the recursion.
    #[arg(long)]
    clamp_demand: bool,
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::io(path, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

fn json_line<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn read_series(path: &Path, column: Column) -> Result<TimeSeries> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    match column {
        Column::Value => TimeSeries::from_csv("input", &text),
        Column::Basefee => {
            let mut lines = text.lines();
            if lines.next().map(str::trim) != Some("index,basefee,factor") {
                return Err(Error::Config("expected header `index,basefee,factor`".into()));
            }
            let values = lines
                .filter(|l| !l.trim().is_empty())
                .enumerate()
                .map(|(i, l)| {
                    l.split(',')
                        .nth(1)
                        .and_then(|v| v.trim().parse().ok())
                        .ok_or_else(|| Error::Config(format!("malformed row at line {}", i + 2)))
                })
                .collect::<Result<Vec<f64>>>()?;
            TimeSeries::new("basefee", 0, values)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Demand { demand, rng, eda, bins, out } => {
            let series = gen_demand(&demand.model(), demand.n, demand.target, &rng.source())?;
            if let Some(path) = eda {
                emit(Some(&path), &json_line(&eda_report(&series, bins)?))?;
            }
            emit(out.as_deref(), &series.to_csv())
        }
        Command::Basefee { demand, rng, params, demand_csv, out } => {
            let series = match demand_csv {
                Some(path) => read_series(&path, Column::Value)?,
                None => gen_demand(&demand.model(), demand.n, demand.target, &rng.source())?,
            };
            let p = Eip1559Params {
                target: demand.target,
                max_change: params.max_change,
                initial_basefee: params.initial_basefee,
                clamp_demand: params.clamp_demand,
            };
            emit(out.as_deref(), &simulate_basefees(&p, &series)?.to_csv())
        }
        Command::Adf { input, column, max_lags, lag_selection, regression } => {
            let series = read_series(&input, column)?;
            let options = AdfOptions {
                max_lags,
                lag_selection: match lag_selection {
                    LagArg::Aic => LagSelection::Aic,
                    LagArg::Fixed => LagSelection::Fixed,
                },
                regression: match regression {
                    RegressionArg::Constant => RegressionKind::Constant,
                    RegressionArg::None => RegressionKind::None,
                },
            };
            emit(None, &json_line(&adf_test(&series, &options)?))
        }
        Command::Ar1 { mu, alpha, sigma, x0, n, rng, out } => {
            let s = simulate_ar1(&Ar1Params { mu, alpha, sigma, x0 }, n, &rng.source())?;
            emit(out.as_deref(), &s.to_csv())
        }
        Command::Rca1 { alpha, mu_beta, sigma2_beta, sigma2_eps, x0, n, rng, out } => {
            let p = Rca1Params { alpha, mu_beta, sigma2_beta, sigma2_eps, x0 };
            emit(out.as_deref(), &simulate_rca1(&p, n, &rng.source())?.to_csv())
        }
        Command::Wang { mu_beta, sigma2_beta, tol } => {
            emit(None, &json_line(&wang_classify(mu_beta, sigma2_beta, tol)?))
        }
        Command::Boundary { lambda_max, points, tol, out } => {
            let grid: Vec<f64> = (0..points)
                .map(|i| lambda_max * i as f64 / (points.max(2) - 1) as f64)
                .collect();
            emit(out.as_deref(), &boundary_csv(&boundary_curve(&grid, tol)?))
        }
        Command::Region { mu_min, mu_max, sigma2_min, sigma2_max, resolution, tol, out } => {
            let spec = RegionSpec {
                mu_range: (mu_min, mu_max),
                sigma2_range: (sigma2_min, sigma2_max),
                mu_points: resolution,
                sigma2_points: resolution,
            };
            emit(out.as_deref(), &region_grid(&spec, tol, None)?.to_csv())
        }
        Command::Pipeline { config, seed, n_blocks, n_sims, out } => {
            let mut cfg = ExperimentConfig::load(&config).map_err(|e| match e {
                Error::Io { .. } => Error::Config(format!("cannot read config: {e}")),
                other => other,
            })?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(n) = n_blocks {
                cfg.n_blocks = n;
            }
            if let Some(n) = n_sims {
                cfg.n_sims = n;
            }
            if let Some(dir) = out {
                cfg.output_dir = dir;
            }
            cfg.validate()?;
            let manifest = run_pipeline(&cfg)?;
            eprintln!(
                "wrote {} artifacts to {}",
                manifest.artifacts.len(),
                cfg.output_dir.display()
            );
            Ok(())
        }
    }
}

/// Parses arguments, runs the command and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
