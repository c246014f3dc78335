//! `hinf-bench` command line.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 a filter diverged
//! (result files are still written).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;

use crate::filters::{FilterKind, GainIntegrator};
use crate::sim::{builtin_scenario, Scenario};

use super::output::emit_results;
use super::runner::{run_benchmark, BenchmarkConfig, BenchmarkOutput};
use super::{HarnessError, VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_DIVERGED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "hinf-bench", version = VERSION, about = "Monte-Carlo attitude filter benchmark")]
pub struct Args {
    /// `caseA`, `caseB` or a path to a scenario file.
    #[arg(long, default_value = "caseA")]
    pub scenario: String,
    /// Comma separated subset of hinf,mekf,game,triad.
    #[arg(long, value_delimiter = ',', default_value = "hinf,mekf,game,triad")]
    pub filters: Vec<FilterKind>,
    #[arg(long, default_value_t = 50)]
    pub runs: usize,
    #[arg(long, default_value_t = 0.9)]
    pub gamma: f64,
    /// Overrides the scenario time step (s).
    #[arg(long)]
    pub dt: Option<f64>,
    /// Overrides the scenario duration (s).
    #[arg(long)]
    pub duration: Option<f64>,
    /// Overrides the scenario base seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
    /// Gain integration scheme: euler or rk4.
    #[arg(long = "p-integrator", default_value = "euler")]
    pub p_integrator: GainIntegrator,
}

impl Args {
    pub fn resolve_scenario(&self) -> Result<Scenario, HarnessError> {
        let mut sc = match builtin_scenario(&self.scenario) {
            Ok(sc) => sc,
            Err(e) => {
                let path = Path::new(&self.scenario);
                if !path.exists() {
                    return Err(e.into());
                }
                Scenario::load(path)?
            }
        };
        if let Some(dt) = self.dt {
            sc.dt = dt;
        }
        if let Some(d) = self.duration {
            sc.duration = d;
        }
        if let Some(s) = self.seed {
            sc.seed = s;
        }
        sc.validate()?;
        Ok(sc)
    }

    pub fn config(&self) -> Result<BenchmarkConfig, HarnessError> {
        if self.filters.is_empty() {
            return Err(HarnessError::Config("no filters selected".into()));
        }
        let mut filters = Vec::with_capacity(self.filters.len());
        for &f in &self.filters {
            if !filters.contains(&f) {
                filters.push(f);
            }
        }
        Ok(BenchmarkConfig {
            filters,
            n_runs: self.runs,
            gamma: self.gamma,
            integrator: self.p_integrator,
            ..BenchmarkConfig::default()
        })
    }
}

pub fn format_summary(output: &BenchmarkOutput) -> String {
    let mut s = format!(
        "{:<8} {:>16} {:>16} {:>6}\n",
        "filter", "transient RMS(°)", "steady RMS(°)", "runs"
    );
    for row in &output.summaries {
        s.push_str(&format!(
            "{:<8} {:>16.3} {:>16.3} {:>6}\n",
            row.filter.name(),
            row.transient_rms_deg,
            row.steady_rms_deg,
            row.n_runs
        ));
    }
    s
}

fn run(args: &Args) -> Result<i32, HarnessError> {
    let scenario = args.resolve_scenario()?;
    let config = args.config()?;
    let start = Instant::now();
    let output = run_benchmark(&scenario, &config)?;
    let elapsed = start.elapsed();
    let files = emit_results(&output, &args.out)?;

    let mut out = std::io::stdout().lock();
    let _ = write!(out, "{}", format_summary(&output));
    let _ = writeln!(
        out,
        "{} runs in {:.2} s, results in {}",
        config.n_runs,
        elapsed.as_secs_f64(),
        files
            .errors_csv
            .parent()
            .unwrap_or(Path::new("."))
            .display()
    );
    for d in &output.divergences {
        eprintln!(
            "warning: {} diverged in run {} at t = {:.3} s: {}",
            d.filter, d.run, d.time, d.reason
        );
    }
    Ok(if output.divergences.is_empty() {
        EXIT_OK
    } else {
        EXIT_DIVERGED
    })
}

/// Entry point; returns the process exit code.
pub fn cli_main<I, A>(args: I) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_ERROR,
            };
            let _ = e.print();
            return code;
        }
    };
    match run(&args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
