//! Monte-Carlo runs and windowed RMS statistics.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::filters::{Estimator, FilterKind, FilterParams, GainIntegrator, GainMatrix};
use crate::sim::{propagate_truth, run_seed, synthesize_with_seed, Scenario};
use crate::so3::geodesic_angle;
use crate::Rotation;

use super::HarnessError;

/// Boundary between the transient and steady-state windows (s).
pub const TRANSIENT_END: f64 = 10.0;

/// Smallest direction scale used when a scenario has no measurement noise.
pub const MIN_TUNING_SCALE: f64 = 1e-3;

/// Where the recursive filters start.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialEstimate {
    /// Identity attitude: no prior knowledge.
    #[default]
    Identity,
    /// The true initial attitude.
    Truth,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkConfig {
    pub filters: Vec<FilterKind>,
    pub n_runs: usize,
    pub gamma: f64,
    pub integrator: GainIntegrator,
    /// `P₀ = initial_gain · I`.
    pub initial_gain: f64,
    pub initial_estimate: InitialEstimate,
    pub transient_end: f64,
    /// Keep the diagonal of `P` on every record.
    pub record_gain: bool,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        Self {
            filters: FilterKind::ALL.to_vec(),
            n_runs: 50,
            gamma: 0.9,
            integrator: GainIntegrator::Euler,
            initial_gain: 0.5,
            initial_estimate: InitialEstimate::Identity,
            transient_end: TRANSIENT_END,
            record_gain: false,
        }
    }
}

/// Per-sample attitude error of one filter in one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub run: u64,
    pub filter: FilterKind,
    pub t: f64,
    pub error_deg: f64,
    /// Diagonal of `P` after the sample, when requested.
    #[serde(skip)]
    pub p_diag: Option<[f64; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub filter: FilterKind,
    pub transient_rms_deg: f64,
    pub steady_rms_deg: f64,
    /// Runs that completed without divergence.
    pub n_runs: usize,
}

/// A filter that diverged in one run; its samples for that run are excluded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Divergence {
    pub run: u64,
    pub filter: FilterKind,
    pub time: f64,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct BenchmarkOutput {
    pub scenario: Scenario,
    pub config: BenchmarkConfig,
    pub records: Vec<RunRecord>,
    pub summaries: Vec<SummaryRow>,
    pub divergences: Vec<Divergence>,
}

impl BenchmarkOutput {
    /// Fails with the first divergence, if any.
    pub fn ensure_converged(&self) -> Result<(), HarnessError> {
        match self.divergences.first() {
            None => Ok(()),
            Some(d) => Err(HarnessError::Diverged {
                run: d.run,
                filter: d.filter,
                time: d.time,
                reason: d.reason.clone(),
            }),
        }
    }

    pub fn summary(&self, filter: FilterKind) -> Option<&SummaryRow> {
        self.summaries.iter().find(|s| s.filter == filter)
    }
}

/// Filter tuning matched to the scenario: `g = σ_process`, `k_i = σ_meas`.
pub fn filter_params_for(
    scenario: &Scenario,
    gamma: f64,
    integrator: GainIntegrator,
) -> Result<FilterParams<f64>, HarnessError> {
    let params = FilterParams::uniform(
        scenario.sigma_process,
        scenario.sigma_meas.max(MIN_TUNING_SCALE),
        gamma,
        scenario.references.clone(),
    )?;
    Ok(params.with_integrator(integrator))
}

struct FilterRun {
    records: Vec<RunRecord>,
    divergence: Option<Divergence>,
}

fn run_filter(
    kind: FilterKind,
    run: u64,
    frames: &[crate::sim::SampleFrame],
    start: Rotation,
    params: &FilterParams<f64>,
    config: &BenchmarkConfig,
    dt: f64,
) -> Result<FilterRun, HarnessError> {
    let gain = GainMatrix::scaled_identity(config.initial_gain)?;
    let mut est = Estimator::new(kind, start, gain);
    let mut records = Vec::with_capacity(frames.len());
    for f in frames {
        match est.advance(&f.omega_meas, &f.y, params, dt) {
            Ok(r_hat) => records.push(RunRecord {
                run,
                filter: kind,
                t: f.t,
                error_deg: geodesic_angle(&f.r_true, &r_hat).to_degrees(),
                p_diag: config
                    .record_gain
                    .then(|| est.gain().map(|g| g.diagonal().to_array()))
                    .flatten(),
            }),
            Err(crate::filters::FilterError::Diverged { time, reason }) => {
                return Ok(FilterRun {
                    records: Vec::new(),
                    divergence: Some(Divergence {
                        run,
                        filter: kind,
                        time,
                        reason: reason.to_string(),
                    }),
                });
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(FilterRun {
        records,
        divergence: None,
    })
}

/// Runs every configured filter on `n_runs` independently seeded realizations.
///
/// Run `r` uses seed `scenario.seed + r`. Runs execute in parallel; the
/// output order (run, then filter order, then time) does not depend on
/// scheduling.
pub fn run_benchmark(
    scenario: &Scenario,
    config: &BenchmarkConfig,
) -> Result<BenchmarkOutput, HarnessError> {
    scenario.validate()?;
    if config.n_runs == 0 {
        return Err(HarnessError::Config(
            "at least one run is required".to_owned(),
        ));
    }
    if config.filters.is_empty() {
        return Err(HarnessError::Config("no filters selected".to_owned()));
    }
    let params = filter_params_for(scenario, config.gamma, config.integrator)?;
    let truth = propagate_truth(scenario);
    let start = match config.initial_estimate {
        InitialEstimate::Identity => Rotation::identity(),
        InitialEstimate::Truth => truth[0],
    };

    let per_run: Vec<Vec<FilterRun>> = (0..config.n_runs as u64)
        .into_par_iter()
        .map(|run| {
            let frames = synthesize_with_seed(&truth, scenario, run_seed(scenario.seed, run));
            config
                .filters
                .iter()
                .map(|&kind| run_filter(kind, run, &frames, start, &params, config, scenario.dt))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;

    let mut records =
        Vec::with_capacity(config.n_runs * config.filters.len() * scenario.num_samples());
    let mut divergences = Vec::new();
    for fr in per_run.into_iter().flatten() {
        records.extend(fr.records);
        divergences.extend(fr.divergence);
    }
    let summaries = summarize(&records, &config.filters, config.transient_end, scenario.dt);
    Ok(BenchmarkOutput {
        scenario: scenario.clone(),
        config: config.clone(),
        records,
        summaries,
        divergences,
    })
}

/// Which part of the run a sample at `t` belongs to.
pub fn is_transient(t: f64, transient_end: f64, dt: f64) -> bool {
    t < transient_end - 0.5 * dt
}

/// Root of the mean squared error over all records of `filter` selected by `keep`.
///
/// Squared errors are pooled across runs and time before taking the root.
pub fn pooled_rms(
    records: &[RunRecord],
    filter: FilterKind,
    keep: impl Fn(&RunRecord) -> bool,
) -> Option<f64> {
    let (sum, n) = records
        .iter()
        .filter(|r| r.filter == filter && keep(r))
        .fold((0.0, 0usize), |(s, n), r| {
            (s + r.error_deg * r.error_deg, n + 1)
        });
    (n > 0).then(|| (sum / n as f64).sqrt())
}

/// Transient and steady-state RMS per filter.
///
/// Filters without records are omitted; an empty window reports NaN.
pub fn summarize(
    records: &[RunRecord],
    filters: &[FilterKind],
    transient_end: f64,
    dt: f64,
) -> Vec<SummaryRow> {
    filters
        .iter()
        .filter_map(|&filter| {
            let runs: std::collections::BTreeSet<u64> = records
                .iter()
                .filter(|r| r.filter == filter)
                .map(|r| r.run)
                .collect();
            if runs.is_empty() {
                return None;
            }
            let transient = pooled_rms(records, filter, |r| is_transient(r.t, transient_end, dt));
            let steady = pooled_rms(records, filter, |r| !is_transient(r.t, transient_end, dt));
            Some(SummaryRow {
                filter,
                transient_rms_deg: transient.unwrap_or(f64::NAN),
                steady_rms_deg: steady.unwrap_or(f64::NAN),
                n_runs: runs.len(),
            })
        })
        .collect()
}

/// Mean absolute error over runs at one sample time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub filter: FilterKind,
    pub t: f64,
    pub mean_abs_error_deg: f64,
}

/// Error averaged across runs at each sample time, per filter, sorted by filter then time.
pub fn mean_error_curve(records: &[RunRecord], filters: &[FilterKind]) -> Vec<CurvePoint> {
    let mut out = Vec::new();
    for &filter in filters {
        // (t bits, sum, count), with t taken from the sample grid and thus identical across runs.
        let mut acc: Vec<(f64, f64, usize)> = Vec::new();
        let mut index = std::collections::BTreeMap::new();
        for r in records.iter().filter(|r| r.filter == filter) {
            let slot = *index.entry(r.t.to_bits()).or_insert_with(|| {
                acc.push((r.t, 0.0, 0));
                acc.len() - 1
            });
            acc[slot].1 += r.error_deg.abs();
            acc[slot].2 += 1;
        }
        let mut points: Vec<CurvePoint> = acc
            .into_iter()
            .map(|(t, sum, n)| CurvePoint {
                filter,
                t,
                mean_abs_error_deg: sum / n as f64,
            })
            .collect();
        points.sort_by(|a, b| a.t.total_cmp(&b.t));
        out.extend(points);
    }
    out
}
