//! Result files.
//!
//! * `errors.csv`: `run,filter,t,error_deg`, one row per filter, run and sample.
//! * `mean_error.csv`: `filter,t,mean_abs_error_deg`, the run-averaged error curve.
//! * `summary.json`: RMS table, divergences, scenario and run configuration.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::runner::{mean_error_curve, BenchmarkConfig, BenchmarkOutput, Divergence, RunRecord};
use super::{HarnessError, VERSION};

pub const ERRORS_CSV: &str = "errors.csv";
pub const MEAN_ERROR_CSV: &str = "mean_error.csv";
pub const SUMMARY_JSON: &str = "summary.json";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmittedFiles {
    pub errors_csv: PathBuf,
    pub mean_error_csv: PathBuf,
    pub summary_json: PathBuf,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FilterSummary {
    pub transient_rms_deg: f64,
    pub steady_rms_deg: f64,
    pub n_runs: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ScenarioEcho {
    pub duration: f64,
    pub dt: f64,
    pub sigma_process: f64,
    pub sigma_meas: f64,
    pub references: Vec<[f64; 3]>,
    pub euler0: [f64; 3],
    pub profile: String,
    pub seed: u64,
}

#[derive(Debug, Serialize)]
struct SummaryDocument<'a> {
    version: &'a str,
    n_runs: usize,
    filters: BTreeMap<String, FilterSummary>,
    divergences: &'a [Divergence],
    scenario: ScenarioEcho,
    config: &'a BenchmarkConfig,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.to_owned(),
        source,
    }
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> HarnessError + '_ {
    move |source| HarnessError::Csv {
        path: path.to_owned(),
        source,
    }
}

fn write_csv<S: Serialize>(
    path: &Path,
    header: &[&str],
    rows: impl IntoIterator<Item = S>,
) -> Result<(), HarnessError> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(BufWriter::new(file));
    w.write_record(header).map_err(csv_err(path))?;
    for row in rows {
        w.serialize(row).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

pub fn write_records_csv(path: &Path, records: &[RunRecord]) -> Result<(), HarnessError> {
    write_csv(path, &["run", "filter", "t", "error_deg"], records)
}

pub fn read_records_csv(path: &Path) -> Result<Vec<RunRecord>, HarnessError> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    r.deserialize()
        .collect::<Result<Vec<RunRecord>, _>>()
        .map_err(csv_err(path))
}

/// Writes the three result files into `out_dir`, creating it if needed.
pub fn emit_results(
    output: &BenchmarkOutput,
    out_dir: &Path,
) -> Result<EmittedFiles, HarnessError> {
    std::fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let files = EmittedFiles {
        errors_csv: out_dir.join(ERRORS_CSV),
        mean_error_csv: out_dir.join(MEAN_ERROR_CSV),
        summary_json: out_dir.join(SUMMARY_JSON),
    };

    write_records_csv(&files.errors_csv, &output.records)?;
    let curve = mean_error_curve(&output.records, &output.config.filters);
    write_csv(
        &files.mean_error_csv,
        &["filter", "t", "mean_abs_error_deg"],
        &curve,
    )?;

    let sc = &output.scenario;
    let doc = SummaryDocument {
        version: VERSION,
        n_runs: output.config.n_runs,
        filters: output
            .summaries
            .iter()
            .map(|s| {
                (
                    s.filter.name().to_owned(),
                    FilterSummary {
                        transient_rms_deg: s.transient_rms_deg,
                        steady_rms_deg: s.steady_rms_deg,
                        n_runs: s.n_runs,
                    },
                )
            })
            .collect(),
        divergences: &output.divergences,
        scenario: ScenarioEcho {
            duration: sc.duration,
            dt: sc.dt,
            sigma_process: sc.sigma_process,
            sigma_meas: sc.sigma_meas,
            references: sc.references.iter().map(|r| r.to_array()).collect(),
            euler0: sc.euler0,
            profile: sc.profile.tag(),
            seed: sc.seed,
        },
        config: &output.config,
    };
    let path = &files.summary_json;
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, &doc).map_err(|source| HarnessError::Json {
        path: path.clone(),
        source,
    })?;
    writeln!(w).and_then(|_| w.flush()).map_err(io_err(path))?;
    Ok(files)
}
