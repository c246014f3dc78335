//! Empirical check of the energy-gain bound
//! `∫‖z‖² ≤ γ²‖z₀‖² + γ²∫(‖δ‖² + Σ‖ε_i‖²)` along a recorded trajectory.

use std::f64::consts::FRAC_PI_2;

use crate::linalg::Vec3;
use crate::scalar::Real;
use crate::so3::AxisAngle;

use super::GainMatrix;

/// One logged step: penalty `z`, injected normalized disturbances and the
/// angular estimation error (rad).
#[derive(Debug, Clone, PartialEq)]
pub struct AuditSample<T> {
    pub z: Vec3<T>,
    pub delta: Vec3<T>,
    pub eps: Vec<Vec3<T>>,
    pub angle: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditReport {
    /// `∫‖z‖² dt` (trapezoidal).
    pub penalty_energy: f64,
    /// `γ²‖z₀‖² + γ²∫(‖δ‖² + Σ‖ε_i‖²) dt` (trapezoidal).
    pub bound: f64,
    pub satisfied: bool,
    pub max_angle: f64,
}

impl AuditReport {
    /// The storage function only certifies the bound for angular errors below π/2.
    pub fn within_validity_region(&self) -> bool {
        self.max_angle < FRAC_PI_2
    }
}

fn trapezoid(values: impl Iterator<Item = f64>, dt: f64) -> f64 {
    let mut total = 0.0;
    let mut prev: Option<f64> = None;
    for v in values {
        if let Some(p) = prev {
            total += 0.5 * (p + v) * dt;
        }
        prev = Some(v);
    }
    total
}

pub fn dissipation_audit<T: Real>(trace: &[AuditSample<T>], dt: f64, gamma: f64) -> AuditReport {
    let f = |v: T| v.to_f64().unwrap_or(f64::NAN);
    let g2 = gamma * gamma;
    let penalty_energy = trapezoid(trace.iter().map(|s| f(s.z.norm_squared())), dt);
    let disturbance = trapezoid(
        trace.iter().map(|s| {
            f(s.delta.norm_squared()) + s.eps.iter().map(|e| f(e.norm_squared())).sum::<f64>()
        }),
        dt,
    );
    let z0 = trace.first().map_or(0.0, |s| f(s.z.norm_squared()));
    let bound = g2 * z0 + g2 * disturbance;
    let max_angle = trace.iter().map(|s| f(s.angle)).fold(0.0, f64::max);
    AuditReport {
        penalty_energy,
        bound,
        satisfied: penalty_energy <= bound,
        max_angle,
    }
}

/// Storage function `V = γ² zᵀP⁻¹z`.
pub fn storage_value<T: Real>(z: &Vec3<T>, p: &GainMatrix<T>, gamma: T) -> T {
    gamma * gamma * z.dot(&(p.inverse() * *z))
}

/// The same storage function from the axis-angle error: `γ² sin²θ · eᵀP⁻¹e`.
pub fn storage_value_axis_angle<T: Real>(error: &AxisAngle<T>, p: &GainMatrix<T>, gamma: T) -> T {
    let s = error.angle.sin();
    gamma * gamma * s * s * error.axis.dot(&(p.inverse() * error.axis))
}
