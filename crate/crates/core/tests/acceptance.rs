//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hinf_attitude::filters::dissipation::{dissipation_audit, AuditSample};
use hinf_attitude::filters::hinf::hinf_step;
use hinf_attitude::filters::mekf::{mekf_step, MekfState};
use hinf_attitude::filters::worst_case::{
    disturbance_objective, worst_case_disturbance, worst_case_meas_error,
};
use hinf_attitude::filters::{FilterKind, FilterState, GainIntegrator};
use hinf_attitude::harness::{filter_params_for, run_benchmark, BenchmarkConfig, BenchmarkOutput};
use hinf_attitude::sim::{propagate_truth, run_seed, synthesize_with_seed, Scenario};
use hinf_attitude::so3::{
    config_error, exp_so3, geodesic_angle, hat, log_so3, project_to_so3, vee,
};
use hinf_attitude::{Gain, Mat3d, Params, Quaternion, Rotation, Vec3d};

const BAND: f64 = 0.35;
const STEADY_SPREAD_DEG: f64 = 0.5;
const TRIAD_RATIO: f64 = 5.0;
const RUNTIME_LIMIT_S: f64 = 60.0;
const GAMMA_LIMIT_TOL: f64 = 1e-6;
const STATIONARITY_TOL: f64 = 1e-6;
const FD_STEP: f64 = 1e-5;
const ROUNDTRIP_TOL: f64 = 1e-9;
const SIN_TOL: f64 = 1e-10;
const GEOMETRY_CASES: usize = 10_000;

/// (filter, transient, steady) reference values in degrees.
const TABLE_A: [(FilterKind, f64, f64); 4] = [
    (FilterKind::Game, 21.68, 4.73),
    (FilterKind::Hinf, 26.24, 4.79),
    (FilterKind::Mekf, 27.79, 4.74),
    (FilterKind::Triad, 59.52, 59.29),
];
const TABLE_B: [(FilterKind, f64, f64); 4] = [
    (FilterKind::Game, 11.85, 4.84),
    (FilterKind::Hinf, 14.63, 4.85),
    (FilterKind::Mekf, 14.82, 4.84),
    (FilterKind::Triad, 26.33, 26.43),
];

struct Outcome {
    pass: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            pass: true,
            notes: vec![],
        }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.pass = false;
            self.notes.push(format!("FAILED {}", what.into()));
        }
    }

    fn info(&mut self, what: impl Into<String>) {
        self.notes.push(what.into());
    }
}

fn report(id: &str, title: &str, o: &Outcome) -> bool {
    println!("{} {id} {title}", if o.pass { "PASS" } else { "FAIL" });
    for n in &o.notes {
        println!("       {n}");
    }
    o.pass
}

fn transient(out: &BenchmarkOutput, k: FilterKind) -> f64 {
    out.summary(k).map_or(f64::NAN, |s| s.transient_rms_deg)
}

fn steady(out: &BenchmarkOutput, k: FilterKind) -> f64 {
    out.summary(k).map_or(f64::NAN, |s| s.steady_rms_deg)
}

fn within_band(value: f64, reference: f64) -> bool {
    (value - reference).abs() <= BAND * reference
}

fn check_table(o: &mut Outcome, out: &BenchmarkOutput, table: &[(FilterKind, f64, f64)]) {
    o.check(
        out.divergences.is_empty(),
        format!("{} divergences", out.divergences.len()),
    );
    for &(k, tr, st) in table {
        let (a, b) = (transient(out, k), steady(out, k));
        o.info(format!(
            "{:<6} transient {a:7.3} (ref {tr:5.2})  steady {b:7.3} (ref {st:5.2})",
            k.name()
        ));
        o.check(
            within_band(a, tr),
            format!("{} transient outside ±35% of {tr}", k.name()),
        );
        o.check(
            within_band(b, st),
            format!("{} steady outside ±35% of {st}", k.name()),
        );
    }
    let steady3: Vec<f64> = [FilterKind::Game, FilterKind::Hinf, FilterKind::Mekf]
        .iter()
        .map(|&k| steady(out, k))
        .collect();
    let spread = steady3.iter().cloned().fold(f64::MIN, f64::max)
        - steady3.iter().cloned().fold(f64::MAX, f64::min);
    o.check(
        spread <= STEADY_SPREAD_DEG,
        format!("steady spread {spread:.3}° > {STEADY_SPREAD_DEG}°"),
    );
    let triad = steady(out, FilterKind::Triad);
    for s in &steady3 {
        o.check(
            triad >= TRIAD_RATIO * s,
            format!("TRIAD steady {triad:.3}° not ≥5× {s:.3}°"),
        );
    }
}

fn ac1() -> bool {
    let mut o = Outcome::new();
    let start = Instant::now();
    let out =
        run_benchmark(&Scenario::case_a(), &BenchmarkConfig::default()).expect("case A benchmark");
    let elapsed = start.elapsed().as_secs_f64();
    check_table(&mut o, &out, &TABLE_A);
    let (g, h, m, t) = (
        transient(&out, FilterKind::Game),
        transient(&out, FilterKind::Hinf),
        transient(&out, FilterKind::Mekf),
        transient(&out, FilterKind::Triad),
    );
    o.check(g < h, format!("GAME < H∞ ({g:.3} vs {h:.3})"));
    o.check(h < m, format!("H∞ < MEKF ({h:.3} vs {m:.3})"));
    o.check(m < t, format!("MEKF < TRIAD ({m:.3} vs {t:.3})"));
    o.info(format!("runtime {elapsed:.2} s"));
    o.check(elapsed <= RUNTIME_LIMIT_S, "runtime over 60 s");
    report("AC1", "Case A table reproduction", &o)
}

fn ac2() -> bool {
    let mut o = Outcome::new();
    let out =
        run_benchmark(&Scenario::case_b(), &BenchmarkConfig::default()).expect("case B benchmark");
    check_table(&mut o, &out, &TABLE_B);
    let (g, h, m) = (
        transient(&out, FilterKind::Game),
        transient(&out, FilterKind::Hinf),
        transient(&out, FilterKind::Mekf),
    );
    o.check(g < h, format!("GAME < H∞ ({g:.3} vs {h:.3})"));
    o.check(h <= m, format!("H∞ ≤ MEKF ({h:.3} vs {m:.3})"));
    report("AC2", "Case B table reproduction", &o)
}

fn ac3() -> bool {
    let mut o = Outcome::new();
    let sc = Scenario::case_a();
    let params = filter_params_for(&sc, 1e6, GainIntegrator::Euler).unwrap();
    let frames = synthesize_with_seed(&propagate_truth(&sc), &sc, sc.seed);
    let p0 = Gain::scaled_identity(0.5).unwrap();
    let mut h = FilterState::new(Rotation::identity(), p0);
    let mut m = MekfState::new(Quaternion::identity(), p0);
    let mut worst = 0.0f64;
    for f in &frames {
        h = hinf_step(&h, &f.omega_meas, &f.y, &params, sc.dt).expect("hinf step");
        m = mekf_step(&m, &f.omega_meas, &f.y, &params, sc.dt).expect("mekf step");
        worst = worst.max(geodesic_angle(&h.attitude, &m.attitude.to_rotation()));
    }
    o.info(format!(
        "max discrepancy {worst:.3e} rad over {} steps",
        frames.len()
    ));
    o.check(worst < GAMMA_LIMIT_TOL, "discrepancy ≥ 1e-6 rad");
    report("AC3", "γ → ∞ limit matches MEKF", &o)
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vec3d {
    loop {
        let v = Vec3d::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v * (1.0 / n);
        }
    }
}

fn random_rotation(rng: &mut ChaCha8Rng, max_angle: f64) -> Rotation {
    exp_so3(&(random_unit(rng) * rng.random_range(0.0..max_angle)))
}

fn random_gain(rng: &mut ChaCha8Rng) -> Gain {
    let a = Mat3d::from_fn(|_, _| rng.random_range(-1.0..1.0));
    Gain::new(a * a.transpose() + Mat3d::identity() * 0.1).unwrap()
}

fn ac4() -> bool {
    let mut o = Outcome::new();
    let sc = Scenario::case_a();
    let gamma = 0.9;
    let params = filter_params_for(&sc, gamma, GainIntegrator::Euler).unwrap();
    let truth = propagate_truth(&sc);
    let (g, k) = (params.g, params.k[0]);
    let mut worst_ratio = 0.0f64;
    let mut worst_angle = 0.0f64;
    for run in 0..50u64 {
        let frames = synthesize_with_seed(&truth, &sc, run_seed(sc.seed, run));
        let mut rng = ChaCha8Rng::seed_from_u64(run);
        let offset = exp_so3(&(random_unit(&mut rng) * 10f64.to_radians()));
        let mut state = FilterState::new(truth[0] * offset, Gain::scaled_identity(0.5).unwrap());
        let mut trace = Vec::with_capacity(frames.len());
        let mut diverged = false;
        for f in &frames {
            let r_tilde = state.attitude.transpose() * f.r_true;
            let delta = (f.omega_meas - sc.profile.omega_true(f.t)) * (1.0 / g);
            let eps =
                f.y.iter()
                    .zip(&sc.references)
                    .map(|(y, r)| (*y - f.r_true.inverse_rotate(r)) * (1.0 / k))
                    .collect();
            trace.push(AuditSample {
                z: config_error(&r_tilde),
                delta,
                eps,
                angle: geodesic_angle(&state.attitude, &f.r_true),
            });
            match hinf_step(&state, &f.omega_meas, &f.y, &params, sc.dt) {
                Ok(s) => state = s,
                Err(e) => {
                    o.check(false, format!("run {run}: {e}"));
                    diverged = true;
                    break;
                }
            }
        }
        if diverged {
            continue;
        }
        let r = dissipation_audit(&trace, sc.dt, gamma);
        worst_ratio = worst_ratio.max(r.penalty_energy / r.bound);
        worst_angle = worst_angle.max(r.max_angle);
        o.check(
            r.satisfied,
            format!(
                "run {run}: ∫‖z‖² = {:.4} > bound {:.4}",
                r.penalty_energy, r.bound
            ),
        );
        o.check(
            r.within_validity_region(),
            format!(
                "run {run}: max error {:.2}° ≥ 90°",
                r.max_angle.to_degrees()
            ),
        );
    }
    o.info(format!(
        "worst ∫‖z‖²/bound = {worst_ratio:.3e}, worst angle {:.2}°",
        worst_angle.to_degrees()
    ));
    report("AC4", "dissipation inequality along 50 runs", &o)
}

fn ac5() -> bool {
    let mut o = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let refs = vec![Vec3d::unit_x(), Vec3d::unit_y(), Vec3d::new(0.0, 0.6, 0.8)];
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let params = Params::new(
            rng.random_range(0.2..2.0),
            (0..refs.len())
                .map(|_| rng.random_range(0.2..2.0))
                .collect(),
            0.9,
            refs.clone(),
        )
        .unwrap();
        let r_hat = random_rotation(&mut rng, PI);
        let r_tilde = random_rotation(&mut rng, 80f64.to_radians());
        let p = random_gain(&mut rng);
        let delta = worst_case_disturbance(&r_tilde, &p, &params);
        let eps: Vec<Vec3d> = (0..refs.len())
            .map(|i| worst_case_meas_error(i, &r_tilde, &r_hat, &p, &params))
            .collect();
        let mut x: Vec<f64> = delta
            .to_array()
            .into_iter()
            .chain(eps.iter().flat_map(|e| e.to_array()))
            .collect();
        let f = |x: &[f64]| {
            let d = Vec3d::new(x[0], x[1], x[2]);
            let e: Vec<Vec3d> = x[3..]
                .chunks(3)
                .map(|c| Vec3d::new(c[0], c[1], c[2]))
                .collect();
            disturbance_objective(&d, &e, &r_tilde, &r_hat, &p, &params)
        };
        let mut grad2 = 0.0;
        for j in 0..x.len() {
            let x0 = x[j];
            x[j] = x0 + FD_STEP;
            let up = f(&x);
            x[j] = x0 - FD_STEP;
            let down = f(&x);
            x[j] = x0;
            grad2 += ((up - down) / (2.0 * FD_STEP)).powi(2);
        }
        worst = worst.max(grad2.sqrt());
    }
    o.info(format!("max ‖∇‖ = {worst:.3e}"));
    o.check(worst < STATIONARITY_TOL, "gradient norm ≥ 1e-6");
    report("AC5", "worst-case disturbances are stationary", &o)
}

fn ac6() -> bool {
    let mut o = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut hat_err, mut rt_err, mut sin_err, mut proj_err) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..GEOMETRY_CASES {
        let v = Vec3d::new(
            rng.random_range(-5.0..5.0),
            rng.random_range(-5.0..5.0),
            rng.random_range(-5.0..5.0),
        );
        hat_err = hat_err.max((vee(&hat(&v)).unwrap() - v).max_abs());

        let axis = random_unit(&mut rng);
        let theta = rng.random_range(1e-6..PI - 1e-3);
        let r = exp_so3(&(axis * theta));
        let aa = log_so3(&r).unwrap();
        let back = exp_so3(&(aa.axis * aa.angle));
        rt_err = rt_err
            .max((aa.axis * aa.angle - axis * theta).max_abs())
            .max((*back.matrix() - *r.matrix()).max_abs());

        sin_err = sin_err.max((config_error(&r).norm() - theta.sin()).abs());

        let noisy = *r.matrix() + Mat3d::from_fn(|_, _| rng.random_range(-0.05..0.05));
        let once = project_to_so3(&noisy).unwrap();
        let twice = project_to_so3(once.matrix()).unwrap();
        proj_err = proj_err.max((*twice.matrix() - *once.matrix()).max_abs());
    }
    o.info(format!(
        "vee∘hat {hat_err:.1e}, exp/log {rt_err:.1e}, ‖z‖ vs sin θ {sin_err:.1e}, projection {proj_err:.1e}"
    ));
    o.check(hat_err == 0.0, "vee∘hat not exact");
    o.check(rt_err < ROUNDTRIP_TOL, "exp/log roundtrip ≥ 1e-9");
    o.check(sin_err < SIN_TOL, "config error vs sin θ ≥ 1e-10");
    o.check(proj_err < ROUNDTRIP_TOL, "projection not idempotent");
    report("AC6", "geometry invariants over 10⁴ cases", &o)
}

fn bench(out: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_hinf-bench"))
        .args([
            "--scenario",
            "caseA",
            "--filters",
            "hinf,mekf,game,triad",
            "--runs",
            "50",
            "--seed",
            "7",
            "--out",
        ])
        .arg(out)
        .output()
        .expect("run hinf-bench")
}

fn ac7() -> bool {
    let mut o = Outcome::new();
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let (ra, rb) = (bench(&a), bench(&b));
    o.check(
        ra.status.success() && rb.status.success(),
        "hinf-bench exited with failure",
    );
    for name in ["errors.csv", "mean_error.csv"] {
        let x = std::fs::read(a.join(name)).unwrap_or_default();
        let y = std::fs::read(b.join(name)).unwrap_or_default();
        o.info(format!("{name}: {} bytes", x.len()));
        o.check(
            !x.is_empty() && x == y,
            format!("{name} differs between invocations"),
        );
    }
    report("AC7", "identical flags give byte-identical CSV", &o)
}

fn ac8() -> bool {
    let mut o = Outcome::new();
    let sc = Scenario::case_a();
    let grid = [
        1e-3, 0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9,
    ];
    let probe = |gamma: f64, n_runs: usize| {
        let cfg = BenchmarkConfig {
            filters: vec![FilterKind::Hinf],
            n_runs,
            gamma,
            ..BenchmarkConfig::default()
        };
        run_benchmark(&sc, &cfg).expect("sweep").divergences.len()
    };
    let counts: Vec<usize> = grid.iter().map(|&g| probe(g, 10)).collect();
    let line: Vec<String> = grid
        .iter()
        .zip(&counts)
        .map(|(g, c)| format!("{g}:{c}"))
        .collect();
    o.info(format!("diverged runs of 10 per γ: {}", line.join(" ")));
    let threshold = grid
        .iter()
        .zip(&counts)
        .rev()
        .find(|(_, &c)| c > 0)
        .map(|(&g, _)| g);
    match threshold {
        Some(t) => {
            o.info(format!("largest diverging γ on the grid: {t}"));
            let below_all = grid
                .iter()
                .zip(&counts)
                .filter(|(&g, _)| g <= t)
                .all(|(_, &c)| c > 0);
            o.check(
                below_all,
                "divergence not monotone in γ below the threshold",
            );
            o.check(t < 0.9, "threshold not below 0.9");
        }
        None => o.check(false, "no γ on the grid diverged"),
    }
    let at_nominal = probe(0.9, 50);
    o.check(
        at_nominal == 0,
        format!("γ = 0.9 diverged in {at_nominal} of 50 runs"),
    );
    report("AC8", "divergence detection over a γ sweep", &o)
}

fn main() {
    let results = [ac1(), ac2(), ac3(), ac4(), ac5(), ac6(), ac7(), ac8()];
    let passed = results.iter().filter(|&&r| r).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
