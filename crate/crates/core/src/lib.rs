//! Attitude estimation on SO(3) from gyro rates and vector-direction measurements.
//!
//! The crate provides a deterministic nonlinear H∞ filter that works directly
//! on rotation matrices, together with the comparison estimators it is
//! benchmarked against (continuous-time quaternion MEKF, the GAME
//! minimum-energy filter, and memoryless TRIAD), a scenario simulator and a
//! Monte-Carlo harness that produces transient/steady-state RMS tables.
//!
//! Geometry and filters are generic over [`Real`] (`f32` or `f64`); the
//! simulator and harness run in `f64`. The aliases below name the common
//! concrete instantiations.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod filters;
pub mod harness;
pub mod linalg;
pub mod scalar;
pub mod sim;
pub mod so3;

pub use filters::{FilterError, FilterParams, GainMatrix, UnitQuaternion};
pub use linalg::{Mat3, Vec3};
pub use scalar::Real;
pub use so3::{AxisAngle, GeometryError, RotationMatrix};

pub type Vec3d = Vec3<f64>;
pub type Mat3d = Mat3<f64>;
pub type Rotation = RotationMatrix<f64>;
pub type Quaternion = UnitQuaternion<f64>;
pub type Gain = GainMatrix<f64>;
pub type Params = FilterParams<f64>;

pub type Vec3f = Vec3<f32>;
pub type Mat3f = Mat3<f32>;
pub type Rotationf = RotationMatrix<f32>;
pub type Paramsf = FilterParams<f32>;
