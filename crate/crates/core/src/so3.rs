//! Geometry of the rotation group SO(3).
//!
//! Conventions used throughout the crate:
//!
//! * `hat(v)·w = v × w`, with `vee` its inverse on skew-symmetric matrices.
//! * A [`RotationMatrix`] `R` maps body-frame coordinates to the reference frame,
//!   so a reference direction `r` is seen in the body frame as `Rᵀ r`.
//! * The estimation error between a truth `R` and an estimate `R̂` is `R̂ᵀ R`.

use thiserror::Error;

use crate::linalg::{Mat3, Vec3};
use crate::scalar::Real;

/// Below this rotation angle (rad) the exponential uses its Taylor series.
pub const SMALL_ANGLE: f64 = 1e-8;

/// `log_so3` refuses angles within this distance of π, where the axis is ill-defined.
pub const NEAR_PI_MARGIN: f64 = 1e-6;

/// Maximum asymmetry accepted by [`vee`].
pub const SKEW_TOLERANCE: f64 = 1e-8;

/// Orthogonality and determinant tolerance of [`RotationMatrix::new`].
pub const ROTATION_TOLERANCE: f64 = 1e-9;

/// Largest Frobenius distance to SO(3) that [`project_to_so3`] accepts.
pub const MAX_PROJECTION_DISTANCE: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("matrix is not skew-symmetric (max |M + Mᵀ| entry {max_asymmetry:e})")]
    NotSkewSymmetric { max_asymmetry: f64 },
    #[error("rotation angle {angle} rad is too close to π for a well-defined axis")]
    NearPiRotation { angle: f64 },
    #[error("matrix is not within Frobenius distance {limit} of SO(3) (distance {distance})")]
    NotNearRotation { distance: f64, limit: f64 },
    #[error("matrix is not a rotation (orthogonality error {orthogonality:e}, det {det})")]
    NotARotation { orthogonality: f64, det: f64 },
    #[error("axis must be a unit vector (norm {norm})")]
    NonUnitAxis { norm: f64 },
}

fn f64_of<T: Real>(v: T) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// An element of SO(3): orthogonal with determinant +1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationMatrix<T> {
    m: Mat3<T>,
}

impl<T: Real> RotationMatrix<T> {
    /// Validates `m` against the rotation invariants at [`ROTATION_TOLERANCE`].
    pub fn new(m: Mat3<T>) -> Result<Self, GeometryError> {
        let orthogonality = (m.transpose() * m - Mat3::identity()).frobenius_norm();
        let det = m.determinant();
        let tol = T::tol(ROTATION_TOLERANCE);
        if orthogonality < tol && (det - T::one()).abs() < tol {
            Ok(Self { m })
        } else {
            Err(GeometryError::NotARotation {
                orthogonality: f64_of(orthogonality),
                det: f64_of(det),
            })
        }
    }

    /// Wraps a matrix already known to be a rotation up to roundoff.
    pub(crate) fn from_matrix_unchecked(m: Mat3<T>) -> Self {
        Self { m }
    }

    pub fn identity() -> Self {
        Self {
            m: Mat3::identity(),
        }
    }

    #[inline]
    pub fn matrix(&self) -> &Mat3<T> {
        &self.m
    }

    #[inline]
    pub fn into_matrix(self) -> Mat3<T> {
        self.m
    }

    #[inline]
    pub fn transpose(&self) -> Self {
        Self {
            m: self.m.transpose(),
        }
    }

    /// Same as [`transpose`](Self::transpose).
    #[inline]
    pub fn inverse(&self) -> Self {
        self.transpose()
    }

    /// `R · v`.
    #[inline]
    pub fn rotate(&self, v: &Vec3<T>) -> Vec3<T> {
        self.m * *v
    }

    /// `Rᵀ · v`.
    #[inline]
    pub fn inverse_rotate(&self, v: &Vec3<T>) -> Vec3<T> {
        self.m.transpose() * *v
    }

    /// `‖RᵀR − I‖_F`.
    pub fn orthogonality_error(&self) -> T {
        (self.m.transpose() * self.m - Mat3::identity()).frobenius_norm()
    }

    pub fn cast<U: Real>(&self) -> RotationMatrix<U> {
        RotationMatrix { m: self.m.cast() }
    }
}

impl<T: Real> std::ops::Mul for RotationMatrix<T> {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        Self { m: self.m * o.m }
    }
}

/// Axis-angle form of a rotation: unit axis and angle in `[0, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisAngle<T> {
    pub axis: Vec3<T>,
    pub angle: T,
}

impl<T: Real> AxisAngle<T> {
    pub fn new(axis: Vec3<T>, angle: T) -> Result<Self, GeometryError> {
        let norm = axis.norm();
        if (norm - T::one()).abs() > T::tol(1e-9) {
            return Err(GeometryError::NonUnitAxis { norm: f64_of(norm) });
        }
        Ok(Self { axis, angle })
    }

    /// The rotation vector `angle · axis`.
    pub fn rotation_vector(&self) -> Vec3<T> {
        self.axis * self.angle
    }
}

/// Skew-symmetric matrix of `v`, so that `hat(v)·w = v × w`.
#[inline]
pub fn hat<T: Real>(v: &Vec3<T>) -> Mat3<T> {
    let z = T::zero();
    Mat3::from_rows_array([[z, -v.z, v.y], [v.z, z, -v.x], [-v.y, v.x, z]])
}

/// Inverse of [`hat`]. Fails if `M` is not skew-symmetric within [`SKEW_TOLERANCE`].
pub fn vee<T: Real>(m: &Mat3<T>) -> Result<Vec3<T>, GeometryError> {
    let asym = (*m + m.transpose()).max_abs();
    if !(asym <= T::tol(SKEW_TOLERANCE)) {
        return Err(GeometryError::NotSkewSymmetric {
            max_asymmetry: f64_of(asym),
        });
    }
    Ok(vee_unchecked(m))
}

/// Reads the skew part of `M` without checking; averages the mirrored entries.
#[inline]
fn vee_unchecked<T: Real>(m: &Mat3<T>) -> Vec3<T> {
    let half = T::lit(0.5);
    Vec3::new(
        (m[(2, 1)] - m[(1, 2)]) * half,
        (m[(0, 2)] - m[(2, 0)]) * half,
        (m[(1, 0)] - m[(0, 1)]) * half,
    )
}

/// Symmetric projection `(M + Mᵀ)/2`.
#[inline]
pub fn sym_proj<T: Real>(m: &Mat3<T>) -> Mat3<T> {
    let half = T::lit(0.5);
    Mat3::from_fn(|i, j| {
        if i == j {
            m[(i, i)]
        } else {
            (m[(i, j)] + m[(j, i)]) * half
        }
    })
}

/// Exponential map (Rodrigues formula) from a rotation vector to SO(3).
pub fn exp_so3<T: Real>(v: &Vec3<T>) -> RotationMatrix<T> {
    let theta = v.norm();
    let k = hat(v);
    let k2 = k * k;
    let m = if theta < T::lit(SMALL_ANGLE) {
        Mat3::identity() + k + k2 * T::lit(0.5)
    } else {
        let a = theta.sin() / theta;
        let b = (T::one() - theta.cos()) / (theta * theta);
        Mat3::identity() + k * a + k2 * b
    };
    RotationMatrix::from_matrix_unchecked(m)
}

/// Rotation angle of `R` in `[0, π]`, valid everywhere including near π.
///
/// Evaluated as `atan2(‖vee(skew R)‖, (tr R − 1)/2)`, which equals the
/// arccos of the clamped trace but stays accurate for tiny angles.
pub fn rotation_angle<T: Real>(r: &RotationMatrix<T>) -> T {
    let s = vee_unchecked(r.matrix()).norm();
    let c = (r.matrix().trace() - T::one()) * T::lit(0.5);
    s.atan2(c.max(-T::one()).min(T::one()))
}

/// Logarithm of a rotation as axis and angle.
///
/// The identity (and any angle below [`SMALL_ANGLE`] with a vanishing skew part)
/// reports the conventional axis `(1, 0, 0)`.
pub fn log_so3<T: Real>(r: &RotationMatrix<T>) -> Result<AxisAngle<T>, GeometryError> {
    let angle = rotation_angle(r);
    if angle >= T::PI() - T::lit(NEAR_PI_MARGIN) {
        return Err(GeometryError::NearPiRotation {
            angle: f64_of(angle),
        });
    }
    let s = vee_unchecked(r.matrix());
    let axis = s.try_normalize().unwrap_or_else(Vec3::unit_x);
    Ok(AxisAngle { axis, angle })
}

/// Configuration error `z = vee((R̃ − R̃ᵀ)/2)`, equal to `e·sin θ̃`.
#[inline]
pub fn config_error<T: Real>(r_tilde: &RotationMatrix<T>) -> Vec3<T> {
    vee_unchecked(r_tilde.matrix())
}

/// The map `E(M) = tr(M)·I − Mᵀ`.
#[inline]
pub fn e_map<T: Real>(m: &Mat3<T>) -> Mat3<T> {
    Mat3::identity() * m.trace() - m.transpose()
}

/// Angle of `R1ᵀR2`: the geodesic distance between two rotations, in radians.
pub fn geodesic_angle<T: Real>(r1: &RotationMatrix<T>, r2: &RotationMatrix<T>) -> T {
    rotation_angle(&(r1.transpose() * *r2))
}

/// Nearest rotation in Frobenius norm (orthogonal polar factor).
///
/// Uses the Newton iteration `X ← (X + X⁻ᵀ)/2`, which converges quadratically
/// to the polar factor of any nonsingular matrix; the result is accepted only
/// if the input lies within [`MAX_PROJECTION_DISTANCE`] of it.
pub fn project_to_so3<T: Real>(m: &Mat3<T>) -> Result<RotationMatrix<T>, GeometryError> {
    let limit = MAX_PROJECTION_DISTANCE;
    let far = |distance: f64| GeometryError::NotNearRotation { distance, limit };
    if !m.is_finite() || m.determinant() <= T::zero() {
        return Err(far(f64::INFINITY));
    }
    let half = T::lit(0.5);
    let stop = T::tol(1e-14);
    let mut x = *m;
    for _ in 0..64 {
        let inv_t = match x.try_inverse() {
            Some(inv) => inv.transpose(),
            None => return Err(far(f64::INFINITY)),
        };
        let next = (x + inv_t) * half;
        let delta = (next - x).frobenius_norm();
        x = next;
        if delta <= stop {
            break;
        }
    }
    let distance = (*m - x).frobenius_norm();
    if !(distance <= T::lit(limit)) {
        return Err(far(f64_of(distance)));
    }
    Ok(RotationMatrix::from_matrix_unchecked(x))
}

/// Rotation from yaw-pitch-roll angles (rad), intrinsic Z-Y-X: `Rz(yaw)·Ry(pitch)·Rx(roll)`.
pub fn euler_to_rotation<T: Real>(yaw: T, pitch: T, roll: T) -> RotationMatrix<T> {
    let (z, o) = (T::zero(), T::one());
    let (sy, cy) = yaw.sin_cos();
    let (sp, cp) = pitch.sin_cos();
    let (sr, cr) = roll.sin_cos();
    let rz = Mat3::from_rows_array([[cy, -sy, z], [sy, cy, z], [z, z, o]]);
    let ry = Mat3::from_rows_array([[cp, z, sp], [z, o, z], [-sp, z, cp]]);
    let rx = Mat3::from_rows_array([[o, z, z], [z, cr, -sr], [z, sr, cr]]);
    RotationMatrix::from_matrix_unchecked(rz * ry * rx)
}
