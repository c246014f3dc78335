//! Nonlinear H∞ filter on SO(3).
//!
//! `Ṙ̂ = R̂(ω − P l)^×`,
//! `Ṗ = P_s(2Pω^×) + P(Σ k_i⁻² ŷ_i^×ŷ_i^×)P + g²I + P²/γ²`.
//!
//! The `P²/γ²` term makes the gain larger than the MEKF's for the same
//! tuning; too small a `γ` makes the Riccati solution blow up in finite time,
//! which [`hinf_step`] reports as [`FilterError::Diverged`].

use crate::linalg::Vec3;
use crate::scalar::Real;
use crate::so3::{exp_so3, project_to_so3};

use super::{
    accept_gain, hinf_riccati_rhs, innovation_from, integrate_gain, FilterError, FilterParams,
    FilterState,
};

/// One step of length `dt` using the gyro rate `omega` and directions `y`.
pub fn hinf_step<T: Real>(
    state: &FilterState<T>,
    omega: &Vec3<T>,
    y: &[Vec3<T>],
    params: &FilterParams<T>,
    dt: T,
) -> Result<FilterState<T>, FilterError> {
    params.check_count(y.len())?;
    let y_hat = params.predicted_directions(&state.attitude);
    let p = state.gain.matrix();
    let l = innovation_from(&y_hat, y, &params.k);
    let corrected = *omega - *p * l;
    let attitude = project_to_so3((state.attitude * exp_so3(&(corrected * dt))).matrix())?;
    let next = integrate_gain(p, dt, params.integrator, |p| {
        hinf_riccati_rhs(p, omega, &y_hat, params)
    });
    let time = state.time + dt;
    let gain = accept_gain(next, params.divergence_limit, time)?;
    Ok(FilterState {
        attitude,
        gain,
        time,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::GainMatrix;
    use crate::so3::{exp_so3, geodesic_angle, RotationMatrix};

    type V = Vec3<f64>;

    #[test]
    fn follows_truth_without_noise() {
        let params = FilterParams::uniform(0.5, 0.5, 0.9, vec![V::unit_x(), V::unit_z()]).unwrap();
        let dt = 0.01;
        let mut truth = exp_so3(&V::new(0.4, 0.1, -0.9));
        let mut state = FilterState::new(truth, GainMatrix::scaled_identity(0.5).unwrap());
        for k in 0..500 {
            let t = k as f64 * dt;
            let omega = V::new((3.0 * t).cos(), 0.1 * (2.0 * t).sin(), -t.cos());
            let y = params.predicted_directions(&truth);
            state = hinf_step(&state, &omega, &y, &params, dt).unwrap();
            truth = truth * exp_so3(&(omega * dt));
            assert!(geodesic_angle(&state.attitude, &truth) < 1e-12);
        }
        assert!((state.time - 5.0).abs() < 1e-9);
    }

    #[test]
    fn converges_from_large_error() {
        let params = FilterParams::uniform(0.5, 0.5, 0.9, vec![V::unit_x(), V::unit_z()]).unwrap();
        let truth = exp_so3(&V::new(0.0, 1.5, 0.5));
        let mut state = FilterState::new(
            RotationMatrix::identity(),
            GainMatrix::scaled_identity(0.5).unwrap(),
        );
        let y = params.predicted_directions(&truth);
        for _ in 0..2000 {
            state = hinf_step(&state, &V::zeros(), &y, &params, 0.01).unwrap();
        }
        assert!(geodesic_angle(&state.attitude, &truth) < 1e-6);
    }

    #[test]
    fn tiny_gamma_diverges() {
        let params = FilterParams::uniform(0.5, 0.5, 1e-3, vec![V::unit_x(), V::unit_z()]).unwrap();
        let mut state = FilterState::new(
            RotationMatrix::identity(),
            GainMatrix::scaled_identity(0.5).unwrap(),
        );
        let y = params.predicted_directions(&RotationMatrix::identity());
        let err = (0..100)
            .try_for_each(|_| {
                state = hinf_step(&state, &V::zeros(), &y, &params, 0.01)?;
                Ok::<_, FilterError>(())
            })
            .unwrap_err();
        assert!(matches!(err, FilterError::Diverged { .. }));
    }

    #[test]
    fn runs_in_single_precision() {
        let params =
            FilterParams::<f32>::uniform(0.5, 0.5, 0.9, vec![Vec3::unit_x(), Vec3::unit_z()])
                .unwrap();
        let truth = exp_so3(&Vec3::<f32>::new(0.3, -0.4, 0.2));
        let mut state = FilterState::new(
            RotationMatrix::identity(),
            GainMatrix::scaled_identity(0.5f32).unwrap(),
        );
        let y = params.predicted_directions(&truth);
        for _ in 0..1500 {
            state = hinf_step(&state, &Vec3::zeros(), &y, &params, 0.01).unwrap();
        }
        assert!(geodesic_angle(&state.attitude, &truth) < 1e-3);
    }
}
