//! Attitude estimators driven by gyro rates and vector-direction measurements.
//!
//! Three recursive filters share the same innovation
//! `l = Σ k_i⁻² (ŷ_i × y_i)` with `ŷ_i = R̂ᵀ r_i` and the attitude update
//! `Ṙ̂ = R̂(ω − P l)^×`; they differ only in how the gain `P` evolves:
//!
//! * [`hinf`]: Riccati update with the extra `P²/γ²` term,
//! * [`mekf`]: quaternion MEKF, the `γ → ∞` limit of the same update,
//! * [`game`]: minimum-energy update with curvature corrections.
//!
//! [`triad`] is the memoryless two-vector baseline. [`worst_case`] and
//! [`dissipation`] evaluate the worst-case disturbances and the energy-gain
//! audit used to check the H∞ design.
//!
//! The continuous-time filters are discretized with an exact exponential step
//! for the attitude and an explicit step ([`GainIntegrator`]) for `P`, with
//! `ω` and the measurements held over the step.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{Mat3, Vec3};
use crate::scalar::Real;
use crate::so3::{hat, sym_proj, GeometryError, RotationMatrix};

pub mod dissipation;
pub mod estimator;
pub mod game;
pub mod hinf;
pub mod mekf;
pub mod quaternion;
pub mod triad;
pub mod worst_case;

pub use estimator::{Estimator, FilterKind};
pub use quaternion::UnitQuaternion;

/// Entry magnitude above which a gain is declared diverged.
pub const DEFAULT_DIVERGENCE_LIMIT: f64 = 1e6;

/// Symmetry tolerance of [`GainMatrix`].
pub const GAIN_SYMMETRY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FilterError {
    #[error("filter gain diverged at t = {time} s: {reason}")]
    Diverged { time: f64, reason: DivergenceReason },
    #[error("direction pair is degenerate (|a × b| = {cross_norm:e})")]
    DegenerateDirections { cross_norm: f64 },
    #[error("expected {expected} direction measurements, got {got}")]
    MeasurementCount { expected: usize, got: usize },
    #[error("gain matrix is not symmetric positive definite: {0}")]
    InvalidGain(String),
    #[error("invalid filter parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Why a gain update was rejected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DivergenceReason {
    NonFinite,
    EntryLimit { max_entry: f64, limit: f64 },
    LostPositiveDefiniteness { minors: [f64; 3] },
}

impl std::fmt::Display for DivergenceReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::NonFinite => write!(f, "non-finite gain entry"),
            Self::EntryLimit { max_entry, limit } => {
                write!(f, "gain entry {max_entry:e} exceeds {limit:e}")
            }
            Self::LostPositiveDefiniteness { minors } => write!(
                f,
                "gain lost positive definiteness (leading minors {:e}, {:e}, {:e})",
                minors[0], minors[1], minors[2]
            ),
        }
    }
}

/// Integration scheme for the gain differential equation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GainIntegrator {
    #[default]
    Euler,
    /// Classic four-stage Runge-Kutta with inputs frozen over the step.
    Rk4,
}

impl std::str::FromStr for GainIntegrator {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "euler" => Ok(Self::Euler),
            "rk4" => Ok(Self::Rk4),
            other => Err(format!(
                "unknown gain integrator `{other}` (expected euler|rk4)"
            )),
        }
    }
}

/// Tuning of the recursive filters.
///
/// `g` scales the process disturbance and `k[i]` the error on the `i`-th
/// direction. For the MEKF they are read as the noise standard deviations
/// `σ_ω` and `σ_i`. `gamma = +∞` removes the H∞ term.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterParams<T> {
    pub g: T,
    pub k: Vec<T>,
    pub gamma: T,
    pub references: Vec<Vec3<T>>,
    pub integrator: GainIntegrator,
    pub divergence_limit: T,
}

impl<T: Real> FilterParams<T> {
    pub fn new(g: T, k: Vec<T>, gamma: T, references: Vec<Vec3<T>>) -> Result<Self, FilterError> {
        let invalid = |m: String| Err(FilterError::InvalidParams(m));
        if !(g >= T::zero()) || !g.is_finite() {
            return invalid(format!("g must be finite and >= 0, got {g}"));
        }
        if !(gamma > T::zero()) {
            return invalid(format!("gamma must be > 0, got {gamma}"));
        }
        if k.len() != references.len() || k.is_empty() {
            return invalid(format!(
                "need one scale per reference direction ({} scales, {} directions)",
                k.len(),
                references.len()
            ));
        }
        if let Some(bad) = k.iter().find(|k| !(**k > T::zero()) || !k.is_finite()) {
            return invalid(format!(
                "measurement scales must be finite and > 0, got {bad}"
            ));
        }
        for r in &references {
            if (r.norm() - T::one()).abs() > T::tol(1e-9) {
                return invalid(format!("reference direction {r:?} is not a unit vector"));
            }
        }
        Ok(Self {
            g,
            k,
            gamma,
            references,
            integrator: GainIntegrator::Euler,
            divergence_limit: T::lit(DEFAULT_DIVERGENCE_LIMIT),
        })
    }

    /// Same `g` for the process and a shared `k` for every direction.
    pub fn uniform(g: T, k: T, gamma: T, references: Vec<Vec3<T>>) -> Result<Self, FilterError> {
        let ks = vec![k; references.len()];
        Self::new(g, ks, gamma, references)
    }

    pub fn with_integrator(mut self, integrator: GainIntegrator) -> Self {
        self.integrator = integrator;
        self
    }

    pub fn with_gamma(mut self, gamma: T) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_divergence_limit(mut self, limit: T) -> Self {
        self.divergence_limit = limit;
        self
    }

    /// Number of direction measurements `p`.
    pub fn len(&self) -> usize {
        self.references.len()
    }

    pub fn is_empty(&self) -> bool {
        self.references.is_empty()
    }

    /// `1/γ²`, zero for `γ = +∞`.
    pub fn inv_gamma_sq(&self) -> T {
        if self.gamma.is_infinite() {
            T::zero()
        } else {
            (self.gamma * self.gamma).recip()
        }
    }

    /// Predicted body-frame directions `ŷ_i = R̂ᵀ r_i`.
    pub fn predicted_directions(&self, r_hat: &RotationMatrix<T>) -> Vec<Vec3<T>> {
        self.references
            .iter()
            .map(|r| r_hat.inverse_rotate(r))
            .collect()
    }

    fn check_count(&self, got: usize) -> Result<(), FilterError> {
        if got == self.len() {
            Ok(())
        } else {
            Err(FilterError::MeasurementCount {
                expected: self.len(),
                got,
            })
        }
    }
}

/// Symmetric positive definite filter gain `P`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainMatrix<T> {
    p: Mat3<T>,
}

impl<T: Real> GainMatrix<T> {
    pub fn new(p: Mat3<T>) -> Result<Self, FilterError> {
        let asym = (p - p.transpose()).max_abs();
        if !(asym < T::tol(GAIN_SYMMETRY_TOLERANCE)) {
            return Err(FilterError::InvalidGain(format!("asymmetry {asym:e}")));
        }
        let minors = leading_minors(&p);
        if minors.iter().any(|m| !(*m > T::zero())) {
            return Err(FilterError::InvalidGain(format!(
                "leading minors {:?}",
                minors
            )));
        }
        Ok(Self { p })
    }

    /// `s·I` for `s > 0`.
    pub fn scaled_identity(s: T) -> Result<Self, FilterError> {
        Self::new(Mat3::identity() * s)
    }

    #[inline]
    pub fn matrix(&self) -> &Mat3<T> {
        &self.p
    }

    pub fn diagonal(&self) -> Vec3<T> {
        self.p.diagonal()
    }

    pub fn inverse(&self) -> Mat3<T> {
        // Positive definite, so the determinant is strictly positive.
        self.p
            .try_inverse()
            .expect("positive definite gain is invertible")
    }
}

/// The three leading principal minors of `m`.
pub fn leading_minors<T: Real>(m: &Mat3<T>) -> [T; 3] {
    [
        m[(0, 0)],
        m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        m.determinant(),
    ]
}

/// Recursive filter state on the rotation group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterState<T> {
    pub attitude: RotationMatrix<T>,
    pub gain: GainMatrix<T>,
    pub time: T,
}

impl<T: Real> FilterState<T> {
    pub fn new(attitude: RotationMatrix<T>, gain: GainMatrix<T>) -> Self {
        Self {
            attitude,
            gain,
            time: T::zero(),
        }
    }
}

/// Innovation `l = Σ k_i⁻² (ŷ_i × y_i)` with `ŷ_i = R̂ᵀ r_i`.
pub fn innovation<T: Real>(
    r_hat: &RotationMatrix<T>,
    y: &[Vec3<T>],
    params: &FilterParams<T>,
) -> Result<Vec3<T>, FilterError> {
    params.check_count(y.len())?;
    let y_hat = params.predicted_directions(r_hat);
    Ok(innovation_from(&y_hat, y, &params.k))
}

pub(crate) fn innovation_from<T: Real>(y_hat: &[Vec3<T>], y: &[Vec3<T>], k: &[T]) -> Vec3<T> {
    y_hat
        .iter()
        .zip(y)
        .zip(k)
        .fold(Vec3::zeros(), |acc, ((yh, yi), ki)| {
            acc + yh.cross(yi) * (*ki * *ki).recip()
        })
}

/// `Σ k_i⁻² ŷ_i^× ŷ_i^×`, the (negative semidefinite) measurement information term.
pub fn direction_information<T: Real>(y_hat: &[Vec3<T>], k: &[T]) -> Mat3<T> {
    y_hat.iter().zip(k).fold(Mat3::zeros(), |acc, (yh, ki)| {
        let h = hat(yh);
        acc + h * h * (*ki * *ki).recip()
    })
}

/// `P_s(2Pω^×) + P(Σ k_i⁻² ŷ_i^×ŷ_i^×)P + g²I`: the gain dynamics shared by every filter.
fn riccati_common<T: Real>(
    p: &Mat3<T>,
    omega: &Vec3<T>,
    y_hat: &[Vec3<T>],
    k: &[T],
    g: T,
) -> Mat3<T> {
    let rot = sym_proj(&(*p * hat(omega) * T::lit(2.0)));
    rot + *p * direction_information(y_hat, k) * *p + Mat3::identity() * (g * g)
}

/// MEKF gain dynamics with process std `sigma_omega` and direction stds `sigmas`.
pub fn mekf_riccati_rhs<T: Real>(
    p: &Mat3<T>,
    omega: &Vec3<T>,
    y_hat: &[Vec3<T>],
    sigma_omega: T,
    sigmas: &[T],
) -> Mat3<T> {
    sym_proj(&riccati_common(p, omega, y_hat, sigmas, sigma_omega))
}

/// H∞ gain dynamics: the MEKF right-hand side plus `P²/γ²`.
pub fn hinf_riccati_rhs<T: Real>(
    p: &Mat3<T>,
    omega: &Vec3<T>,
    y_hat: &[Vec3<T>],
    params: &FilterParams<T>,
) -> Mat3<T> {
    let base = riccati_common(p, omega, y_hat, &params.k, params.g);
    sym_proj(&(base + *p * *p * params.inv_gamma_sq()))
}

/// GAME gain dynamics: the MEKF right-hand side plus the curvature corrections
/// `−P_s(P(Pl)^×) + P·E(Σ_i P_s(k_i⁻²(ŷ_i − y_i)y_iᵀ))·P`.
pub fn game_riccati_rhs<T: Real>(
    p: &Mat3<T>,
    omega: &Vec3<T>,
    y_hat: &[Vec3<T>],
    y: &[Vec3<T>],
    params: &FilterParams<T>,
) -> Mat3<T> {
    let base = riccati_common(p, omega, y_hat, &params.k, params.g);
    let l = innovation_from(y_hat, y, &params.k);
    let twist = sym_proj(&(*p * hat(&(*p * l))));
    let residual = y_hat
        .iter()
        .zip(y)
        .zip(&params.k)
        .fold(Mat3::zeros(), |acc, ((yh, yi), ki)| {
            acc + sym_proj(&((*yh - *yi).outer(yi) * (*ki * *ki).recip()))
        });
    let curvature = *p * crate::so3::e_map(&residual) * *p;
    sym_proj(&(base - twist + curvature))
}

/// Advances `P` by one step of `dt` and symmetrizes the result.
pub(crate) fn integrate_gain<T: Real>(
    p: &Mat3<T>,
    dt: T,
    integrator: GainIntegrator,
    rhs: impl Fn(&Mat3<T>) -> Mat3<T>,
) -> Mat3<T> {
    let next = match integrator {
        GainIntegrator::Euler => *p + rhs(p) * dt,
        GainIntegrator::Rk4 => {
            let half = dt * T::lit(0.5);
            let k1 = rhs(p);
            let k2 = rhs(&(*p + k1 * half));
            let k3 = rhs(&(*p + k2 * half));
            let k4 = rhs(&(*p + k3 * dt));
            *p + (k1 + (k2 + k3) * T::lit(2.0) + k4) * (dt / T::lit(6.0))
        }
    };
    sym_proj(&next)
}

/// Accepts an updated gain or reports divergence at time `time`.
pub(crate) fn accept_gain<T: Real>(
    p: Mat3<T>,
    limit: T,
    time: T,
) -> Result<GainMatrix<T>, FilterError> {
    let t = time.to_f64().unwrap_or(f64::NAN);
    let diverged = |reason| Err(FilterError::Diverged { time: t, reason });
    if !p.is_finite() {
        return diverged(DivergenceReason::NonFinite);
    }
    let max_entry = p.max_abs();
    if max_entry > limit {
        return diverged(DivergenceReason::EntryLimit {
            max_entry: max_entry.to_f64().unwrap_or(f64::NAN),
            limit: limit.to_f64().unwrap_or(f64::NAN),
        });
    }
    let minors = leading_minors(&p);
    if minors.iter().any(|m| !(*m > T::zero())) {
        return diverged(DivergenceReason::LostPositiveDefiniteness {
            minors: minors.map(|m| m.to_f64().unwrap_or(f64::NAN)),
        });
    }
    GainMatrix::new(p)
}
