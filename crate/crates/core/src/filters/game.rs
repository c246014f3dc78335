//! Geometric approximate minimum-energy (GAME) filter.
//!
//! Same attitude update and innovation as the H∞ filter; the gain picks up
//! two curvature corrections, `−P_s(P(Pl)^×)` and
//! `P·E(Σ_i P_s(k_i⁻²(ŷ_i − y_i)y_iᵀ))·P`. With a large initial gain these can
//! destabilize the Riccati equation, which is reported as divergence.

use crate::linalg::Vec3;
use crate::scalar::Real;
use crate::so3::{exp_so3, project_to_so3};

use super::{
    accept_gain, game_riccati_rhs, innovation_from, integrate_gain, FilterError, FilterParams,
    FilterState,
};

pub fn game_step<T: Real>(
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
        game_riccati_rhs(p, omega, &y_hat, y, params)
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
    use crate::filters::hinf::hinf_step;
    use crate::filters::GainMatrix;
    use crate::so3::{geodesic_angle, RotationMatrix};

    type V = Vec3<f64>;

    #[test]
    fn agrees_with_mekf_gain_when_innovation_is_zero() {
        let params =
            FilterParams::uniform(0.5, 0.5, f64::INFINITY, vec![V::unit_x(), V::unit_z()]).unwrap();
        let truth = exp_so3(&V::new(0.5, 0.5, 0.1));
        let start = FilterState::new(truth, GainMatrix::scaled_identity(0.5).unwrap());
        let y = params.predicted_directions(&truth);
        let omega = V::new(0.1, 0.2, 0.3);
        let game = game_step(&start, &omega, &y, &params, 0.01).unwrap();
        let mekf_like = hinf_step(&start, &omega, &y, &params, 0.01).unwrap();
        assert!((*game.gain.matrix() - *mekf_like.gain.matrix()).max_abs() < 1e-15);
        assert!(geodesic_angle(&game.attitude, &mekf_like.attitude) < 1e-15);
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
            state = game_step(&state, &V::zeros(), &y, &params, 0.01).unwrap();
        }
        assert!(geodesic_angle(&state.attitude, &truth) < 1e-6);
    }
}
