//! Monte-Carlo benchmark: runs, statistics, result files and the CLI.

use std::path::PathBuf;

use thiserror::Error;

use crate::filters::{FilterError, FilterKind};
use crate::sim::ScenarioError;

pub mod cli;
pub mod output;
pub mod runner;

pub use output::{emit_results, read_records_csv, EmittedFiles};
pub use runner::{
    filter_params_for, mean_error_curve, pooled_rms, run_benchmark, summarize, BenchmarkConfig,
    BenchmarkOutput, CurvePoint, Divergence, InitialEstimate, RunRecord, SummaryRow, TRANSIENT_END,
};

/// Version string recorded in result files.
pub const VERSION: &str = env!("HINF_BUILD_VERSION");

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error("{0}")]
    Config(String),
    #[error("filter {filter} diverged in run {run} at t = {time} s: {reason}")]
    Diverged {
        run: u64,
        filter: FilterKind,
        time: f64,
        reason: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}
