//! One stepping interface over the four estimators.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::linalg::Vec3;
use crate::scalar::Real;
use crate::so3::RotationMatrix;

use super::game::game_step;
use super::hinf::hinf_step;
use super::mekf::{mekf_step, MekfState};
use super::triad::triad_estimate;
use super::{FilterError, FilterParams, FilterState, GainMatrix, UnitQuaternion};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterKind {
    Hinf,
    Mekf,
    Game,
    Triad,
}

impl FilterKind {
    pub const ALL: [FilterKind; 4] = [Self::Hinf, Self::Mekf, Self::Game, Self::Triad];

    pub fn name(self) -> &'static str {
        match self {
            Self::Hinf => "hinf",
            Self::Mekf => "mekf",
            Self::Game => "game",
            Self::Triad => "triad",
        }
    }

    /// Label used in printed tables.
    pub fn label(self) -> &'static str {
        match self {
            Self::Hinf => "H-inf filter",
            Self::Mekf => "MEKF",
            Self::Game => "GAME",
            Self::Triad => "TRIAD",
        }
    }
}

impl fmt::Display for FilterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FilterKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                format!("unknown filter `{s}` (expected one of hinf, mekf, game, triad)")
            })
    }
}

/// A running estimator of any kind.
#[derive(Debug, Clone)]
pub enum Estimator<T> {
    Hinf(FilterState<T>),
    Mekf(MekfState<T>),
    Game(FilterState<T>),
    Triad(Option<RotationMatrix<T>>),
}

impl<T: Real> Estimator<T> {
    /// Starts a filter at `attitude` with gain `gain`; TRIAD ignores both.
    pub fn new(kind: FilterKind, attitude: RotationMatrix<T>, gain: GainMatrix<T>) -> Self {
        match kind {
            FilterKind::Hinf => Self::Hinf(FilterState::new(attitude, gain)),
            FilterKind::Mekf => Self::Mekf(MekfState::new(
                UnitQuaternion::from_rotation(&attitude),
                gain,
            )),
            FilterKind::Game => Self::Game(FilterState::new(attitude, gain)),
            FilterKind::Triad => Self::Triad(None),
        }
    }

    pub fn kind(&self) -> FilterKind {
        match self {
            Self::Hinf(_) => FilterKind::Hinf,
            Self::Mekf(_) => FilterKind::Mekf,
            Self::Game(_) => FilterKind::Game,
            Self::Triad(_) => FilterKind::Triad,
        }
    }

    /// Current attitude estimate (identity for TRIAD before its first sample).
    pub fn attitude(&self) -> RotationMatrix<T> {
        match self {
            Self::Hinf(s) | Self::Game(s) => s.attitude,
            Self::Mekf(s) => s.attitude.to_rotation(),
            Self::Triad(r) => r.unwrap_or_else(RotationMatrix::identity),
        }
    }

    pub fn gain(&self) -> Option<&GainMatrix<T>> {
        match self {
            Self::Hinf(s) | Self::Game(s) => Some(&s.gain),
            Self::Mekf(s) => Some(&s.gain),
            Self::Triad(_) => None,
        }
    }

    /// Consumes the sample taken at time `t` and returns the estimate for `t`.
    ///
    /// Recursive filters report the attitude they held at `t` and then
    /// integrate over `[t, t + dt]`; TRIAD solves from this sample alone.
    pub fn advance(
        &mut self,
        omega: &Vec3<T>,
        y: &[Vec3<T>],
        params: &FilterParams<T>,
        dt: T,
    ) -> Result<RotationMatrix<T>, FilterError> {
        let current = self.attitude();
        match self {
            Self::Hinf(s) => *s = hinf_step(s, omega, y, params, dt)?,
            Self::Mekf(s) => *s = mekf_step(s, omega, y, params, dt)?,
            Self::Game(s) => *s = game_step(s, omega, y, params, dt)?,
            Self::Triad(r) => {
                if y.len() < 2 || params.references.len() < 2 {
                    return Err(FilterError::MeasurementCount {
                        expected: 2,
                        got: y.len().min(params.references.len()),
                    });
                }
                let est =
                    triad_estimate(&y[0], &y[1], &params.references[0], &params.references[1])?;
                *r = Some(est);
                return Ok(est);
            }
        }
        Ok(current)
    }
}
