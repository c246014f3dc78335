//! Worst-case disturbances of the H∞ design.
//!
//! With the storage function `V = γ² zᵀP⁻¹z`, the dissipation inequality
//! contains the disturbance-dependent part
//!
//! `γ² [ g zᵀP⁻¹E(R̃)δ − zᵀP⁻¹Eᵀ(R̃) Σ_i G_i k_i ε_i − ‖δ‖² − Σ_i ‖ε_i‖² ]`,
//!
//! a concave quadratic in `(δ, ε)` whose maximizers are
//! `δ* = (g/2) Eᵀ(R̃) P⁻¹ z` and `ε_i* = −(k_i/2) G_iᵀ E(R̃) P⁻¹ z`, where
//! `G_i = k_i⁻² P (ŷ_i^×)ᵀ` is the small-error gain block.

use crate::linalg::{Mat3, Vec3};
use crate::scalar::Real;
use crate::so3::{config_error, e_map, hat, RotationMatrix};

use super::{FilterParams, GainMatrix};

/// `δ* = (g/2)·Eᵀ(R̃)·P⁻¹·z` with `z = config_error(R̃)`.
pub fn worst_case_disturbance<T: Real>(
    r_tilde: &RotationMatrix<T>,
    p: &GainMatrix<T>,
    params: &FilterParams<T>,
) -> Vec3<T> {
    let z = config_error(r_tilde);
    e_map(r_tilde.matrix()).transpose() * (p.inverse() * z) * (params.g * T::lit(0.5))
}

/// Gain block `G_i = k_i⁻² P (ŷ_i^×)ᵀ` with `ŷ_i = R̂ᵀ r_i`.
///
/// Panics if `i` is not a valid measurement index.
pub fn measurement_gain_block<T: Real>(
    i: usize,
    r_hat: &RotationMatrix<T>,
    p: &GainMatrix<T>,
    params: &FilterParams<T>,
) -> Mat3<T> {
    let y_hat = r_hat.inverse_rotate(&params.references[i]);
    let k = params.k[i];
    *p.matrix() * hat(&y_hat).transpose() * (k * k).recip()
}

/// `ε_i* = −(k_i/2)·G_iᵀ·E(R̃)·P⁻¹·z`.
///
/// `r_hat` is the estimate the gain block is evaluated at; the error is
/// `R̃ = R̂ᵀR`. Panics if `i` is not a valid measurement index.
pub fn worst_case_meas_error<T: Real>(
    i: usize,
    r_tilde: &RotationMatrix<T>,
    r_hat: &RotationMatrix<T>,
    p: &GainMatrix<T>,
    params: &FilterParams<T>,
) -> Vec3<T> {
    let z = config_error(r_tilde);
    let g_i = measurement_gain_block(i, r_hat, p, params);
    g_i.transpose() * (e_map(r_tilde.matrix()) * (p.inverse() * z)) * (-params.k[i] * T::lit(0.5))
}

/// Disturbance-dependent part of the dissipation inequality, divided by `γ²`.
///
/// `eps` must hold one vector per measurement.
pub fn disturbance_objective<T: Real>(
    delta: &Vec3<T>,
    eps: &[Vec3<T>],
    r_tilde: &RotationMatrix<T>,
    r_hat: &RotationMatrix<T>,
    p: &GainMatrix<T>,
    params: &FilterParams<T>,
) -> T {
    let z = config_error(r_tilde);
    let pz = p.inverse() * z;
    let e = e_map(r_tilde.matrix());
    let process = params.g * pz.dot(&(e * *delta));
    let injected = eps
        .iter()
        .enumerate()
        .fold(Vec3::zeros(), |acc, (i, eps_i)| {
            acc + measurement_gain_block(i, r_hat, p, params) * (*eps_i * params.k[i])
        });
    let measurement = pz.dot(&(e.transpose() * injected));
    let energy = delta.norm_squared() + eps.iter().fold(T::zero(), |acc, v| acc + v.norm_squared());
    process - measurement - energy
}
