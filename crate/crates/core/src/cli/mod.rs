//! Command-line front end.

mod commands;
pub mod config;
pub mod pipeline;

pub use commands::{main_with_args, Cli};
pub use config::{BoundarySpec, Experiment, ExperimentConfig};
pub use pipeline::{run_pipeline, setup_verdict, table2_csv, table2_rows, Manifest, TableRow};
