//! Continuous-time quaternion MEKF.
//!
//! `q̇ = ½ q ⊗ (ω_ref, 0)` with `ω_ref = ω − P Σ σ_i⁻² (ŷ_i × y_i)` and
//! `Ṗ = P_s(2Pω^×) + P(Σ σ_i⁻² ŷ_i^×ŷ_i^×)P + σ_ω² I`. The noise levels are
//! read from [`FilterParams`]: `σ_ω = g`, `σ_i = k_i`; `γ` is ignored.

use crate::linalg::Vec3;
use crate::scalar::Real;

use super::{
    accept_gain, innovation_from, integrate_gain, mekf_riccati_rhs, FilterError, FilterParams,
    GainMatrix, UnitQuaternion,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MekfState<T> {
    pub attitude: UnitQuaternion<T>,
    pub gain: GainMatrix<T>,
    pub time: T,
}

impl<T: Real> MekfState<T> {
    pub fn new(attitude: UnitQuaternion<T>, gain: GainMatrix<T>) -> Self {
        Self {
            attitude,
            gain,
            time: T::zero(),
        }
    }
}

pub fn mekf_step<T: Real>(
    state: &MekfState<T>,
    omega: &Vec3<T>,
    y: &[Vec3<T>],
    params: &FilterParams<T>,
    dt: T,
) -> Result<MekfState<T>, FilterError> {
    params.check_count(y.len())?;
    let y_hat = params.predicted_directions(&state.attitude.to_rotation());
    let p = state.gain.matrix();
    let omega_ref = *omega - *p * innovation_from(&y_hat, y, &params.k);
    let attitude =
        (state.attitude * UnitQuaternion::exp(&(omega_ref * (dt * T::lit(0.5))))).renormalize();
    let next = integrate_gain(p, dt, params.integrator, |p| {
        mekf_riccati_rhs(p, omega, &y_hat, params.g, &params.k)
    });
    let time = state.time + dt;
    let gain = accept_gain(next, params.divergence_limit, time)?;
    Ok(MekfState {
        attitude,
        gain,
        time,
    })
}
