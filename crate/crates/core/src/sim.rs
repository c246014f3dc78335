//! Ground truth and noisy sensor data for benchmark scenarios.
//!
//! The truth follows `Ṙ = R ω_true^×` and is integrated with a Lie-Euler
//! step evaluated at the interval midpoint. Each sample `k` carries
//!
//! * `ω_meas = ω_true(t_k) + σ_process · n_k`,
//! * `y_i = R_kᵀ r_i + σ_meas · m_{i,k}`,
//!
//! with i.i.d. standard normal `n`, `m` drawn at the sample rate (no `√dt`
//! scaling). Measured directions are not renormalized.
//!
//! Noise comes from ChaCha8 seeded with `seed + run_index`, so every run is
//! reproducible independently of how runs are scheduled.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::so3::{euler_to_rotation, exp_so3, project_to_so3};
use crate::{Rotation, Vec3d};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("unknown angular velocity profile `{0}` (expected caseA, zero or constant:wx,wy,wz)")]
    UnknownProfile(String),
    #[error("unknown scenario `{0}` (expected caseA or caseB)")]
    UnknownScenario(String),
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Named analytic angular velocity profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OmegaProfile {
    /// `(cos 3t, 0.1 sin 2t, −cos t)` rad/s.
    CaseA,
    Zero,
    Constant(Vec3d),
}

impl OmegaProfile {
    pub fn omega_true(&self, t: f64) -> Vec3d {
        match self {
            Self::CaseA => Vec3d::new((3.0 * t).cos(), 0.1 * (2.0 * t).sin(), -t.cos()),
            Self::Zero => Vec3d::zeros(),
            Self::Constant(w) => *w,
        }
    }

    pub fn tag(&self) -> String {
        match self {
            Self::CaseA => "caseA".to_owned(),
            Self::Zero => "zero".to_owned(),
            Self::Constant(w) => format!("constant:{}", format_vec(w)),
        }
    }

    pub fn parse(tag: &str) -> Result<Self, ScenarioError> {
        let tag = tag.trim();
        match tag {
            "caseA" => Ok(Self::CaseA),
            "zero" => Ok(Self::Zero),
            _ => match tag.strip_prefix("constant:") {
                Some(rest) => parse_vec(rest)
                    .map(Self::Constant)
                    .map_err(|_| ScenarioError::UnknownProfile(tag.to_owned())),
                None => Err(ScenarioError::UnknownProfile(tag.to_owned())),
            },
        }
    }
}

/// Noise level `√(π/12)` shared by the built-in scenarios.
pub fn base_noise_std() -> f64 {
    (PI / 12.0).sqrt()
}

/// A simulation setup. `euler0` holds yaw, pitch, roll (rad) of the initial attitude.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub duration: f64,
    pub dt: f64,
    pub references: Vec<Vec3d>,
    pub sigma_process: f64,
    pub sigma_meas: f64,
    pub euler0: [f64; 3],
    pub profile: OmegaProfile,
    pub seed: u64,
}

impl Scenario {
    /// Case A: 30 s at 100 Hz, equal gyro and direction noise `√(π/12)`.
    pub fn case_a() -> Self {
        Self {
            duration: 30.0,
            dt: 0.01,
            references: vec![Vec3d::unit_x(), Vec3d::unit_z()],
            sigma_process: base_noise_std(),
            sigma_meas: base_noise_std(),
            euler0: [PI, -FRAC_PI_2, FRAC_PI_2],
            profile: OmegaProfile::CaseA,
            seed: 0,
        }
    }

    /// Case B: Case A with doubled gyro noise and halved direction noise.
    pub fn case_b() -> Self {
        Self {
            sigma_process: 2.0 * base_noise_std(),
            sigma_meas: 0.5 * base_noise_std(),
            ..Self::case_a()
        }
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let invalid = |m: String| Err(ScenarioError::Invalid(m));
        if !(self.duration > 0.0) || !self.duration.is_finite() {
            return invalid(format!("duration must be > 0, got {}", self.duration));
        }
        if !(self.dt > 0.0 && self.dt <= self.duration) {
            return invalid(format!("dt must be in (0, duration], got {}", self.dt));
        }
        if self.references.is_empty() {
            return invalid("at least one reference direction is required".to_owned());
        }
        if !(self.sigma_process >= 0.0) || !(self.sigma_meas >= 0.0) {
            return invalid("noise levels must be >= 0".to_owned());
        }
        if !self.euler0.iter().all(|a| a.is_finite()) {
            return invalid("initial Euler angles must be finite".to_owned());
        }
        for (i, r) in self.references.iter().enumerate() {
            if (r.norm() - 1.0).abs() > 1e-9 {
                return invalid(format!("r{} is not a unit vector", i + 1));
            }
            for (j, s) in self.references.iter().enumerate().skip(i + 1) {
                if r.cross(s).norm() <= 1e-6 {
                    return invalid(format!("r{} and r{} are collinear", i + 1, j + 1));
                }
            }
        }
        Ok(())
    }

    pub fn initial_attitude(&self) -> Rotation {
        euler_to_rotation(self.euler0[0], self.euler0[1], self.euler0[2])
    }

    /// Number of samples, `round(duration / dt)`.
    pub fn num_samples(&self) -> usize {
        ((self.duration / self.dt).round() as usize).max(1)
    }

    pub fn time_of(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }

    /// Renders the `key = value` config format.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "duration = {}", self.duration);
        let _ = writeln!(s, "dt = {}", self.dt);
        let _ = writeln!(s, "sigma_process = {}", self.sigma_process);
        let _ = writeln!(s, "sigma_meas = {}", self.sigma_meas);
        for (i, r) in self.references.iter().enumerate() {
            let _ = writeln!(s, "r{} = {}", i + 1, format_vec(r));
        }
        let [a, b, c] = self.euler0;
        let _ = writeln!(s, "euler0 = {a}, {b}, {c}");
        let _ = writeln!(s, "profile = {}", self.profile.tag());
        let _ = writeln!(s, "seed = {}", self.seed);
        s
    }

    /// Parses the `key = value` config format. Keys that are absent keep
    /// their Case A value; `r1, r2, …` replace the reference list as a whole
    /// and must be numbered consecutively from 1.
    pub fn from_config_str(text: &str) -> Result<Self, ScenarioError> {
        let mut sc = Self::case_a();
        let mut refs: Vec<(usize, Vec3d)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |message: String| ScenarioError::Parse { line, message };
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got `{content}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let num = |v: &str| v.parse::<f64>().map_err(|e| err(format!("{key}: {e}")));
            match key {
                "duration" => sc.duration = num(value)?,
                "dt" => sc.dt = num(value)?,
                "sigma_process" => sc.sigma_process = num(value)?,
                "sigma_meas" => sc.sigma_meas = num(value)?,
                "euler0" => sc.euler0 = parse_vec(value).map_err(&err)?.to_array(),
                "profile" => sc.profile = OmegaProfile::parse(value)?,
                "seed" => sc.seed = value.parse().map_err(|e| err(format!("seed: {e}")))?,
                _ => match key.strip_prefix('r').and_then(|n| n.parse::<usize>().ok()) {
                    Some(n) if n >= 1 => refs.push((n, parse_vec(value).map_err(&err)?)),
                    _ => return Err(err(format!("unknown key `{key}`"))),
                },
            }
        }
        if !refs.is_empty() {
            refs.sort_by_key(|(n, _)| *n);
            if refs.iter().enumerate().any(|(i, (n, _))| *n != i + 1) {
                return Err(ScenarioError::Invalid(
                    "reference directions must be numbered r1, r2, ... without gaps".to_owned(),
                ));
            }
            sc.references = refs.into_iter().map(|(_, r)| r).collect();
        }
        sc.validate()?;
        Ok(sc)
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_config_str(&text)
    }

    pub fn save(&self, path: &Path) -> Result<(), ScenarioError> {
        std::fs::write(path, self.to_config_string()).map_err(|source| ScenarioError::Io {
            path: path.to_owned(),
            source,
        })
    }
}

fn format_vec(v: &Vec3d) -> String {
    format!("{}, {}, {}", v.x, v.y, v.z)
}

fn parse_vec(s: &str) -> Result<Vec3d, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got `{s}`"));
    }
    let mut out = [0.0; 3];
    for (o, p) in out.iter_mut().zip(&parts) {
        *o = p.parse().map_err(|e| format!("`{p}`: {e}"))?;
    }
    Ok(Vec3d::from_array(out))
}

/// Built-in scenario by name: `caseA` or `caseB`.
pub fn builtin_scenario(name: &str) -> Result<Scenario, ScenarioError> {
    match name {
        "caseA" | "casea" | "A" => Ok(Scenario::case_a()),
        "caseB" | "caseb" | "B" => Ok(Scenario::case_b()),
        other => Err(ScenarioError::UnknownScenario(other.to_owned())),
    }
}

/// True angular velocity of the Case A profile, `(cos 3t, 0.1 sin 2t, −cos t)`.
pub fn omega_true(t: f64) -> Vec3d {
    OmegaProfile::CaseA.omega_true(t)
}

/// One sensor sample with the truth it was generated from.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleFrame {
    pub t: f64,
    pub omega_meas: Vec3d,
    pub y: Vec<Vec3d>,
    pub r_true: Rotation,
}

/// Truth attitudes at `t_k = k·dt` for `k = 0..=N`.
pub fn propagate_truth(scenario: &Scenario) -> Vec<Rotation> {
    let n = scenario.num_samples();
    let dt = scenario.dt;
    let mut out = Vec::with_capacity(n + 1);
    let mut r = scenario.initial_attitude();
    out.push(r);
    for k in 0..n {
        let w = scenario.profile.omega_true(scenario.time_of(k) + 0.5 * dt);
        let next = r * exp_so3(&(w * dt));
        // One Newton polish keeps accumulated roundoff off the manifold bounded.
        r = project_to_so3(next.matrix()).unwrap_or(next);
        out.push(r);
    }
    out
}

/// Seed of run `run_index` for base seed `base`.
pub fn run_seed(base: u64, run_index: u64) -> u64 {
    base.wrapping_add(run_index)
}

/// Noisy samples for every truth attitude but the last, drawn with `scenario.seed`.
pub fn synthesize_measurements(truth: &[Rotation], scenario: &Scenario) -> Vec<SampleFrame> {
    synthesize_with_seed(truth, scenario, scenario.seed)
}

pub fn synthesize_with_seed(
    truth: &[Rotation],
    scenario: &Scenario,
    seed: u64,
) -> Vec<SampleFrame> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal3 = |rng: &mut ChaCha8Rng| {
        let mut draw = || -> f64 { StandardNormal.sample(rng) };
        Vec3d::new(draw(), draw(), draw())
    };
    let n = truth.len().saturating_sub(1).min(scenario.num_samples());
    (0..n)
        .map(|k| {
            let t = scenario.time_of(k);
            let r_true = truth[k];
            let omega_meas =
                scenario.profile.omega_true(t) + normal3(&mut rng) * scenario.sigma_process;
            let y = scenario
                .references
                .iter()
                .map(|r| r_true.inverse_rotate(r) + normal3(&mut rng) * scenario.sigma_meas)
                .collect();
            SampleFrame {
                t,
                omega_meas,
                y,
                r_true,
            }
        })
        .collect()
}

/// Truth and samples of run `run_index` (seed `scenario.seed + run_index`).
pub fn simulate_run(scenario: &Scenario, run_index: u64) -> Vec<SampleFrame> {
    let truth = propagate_truth(scenario);
    synthesize_with_seed(&truth, scenario, run_seed(scenario.seed, run_index))
}
