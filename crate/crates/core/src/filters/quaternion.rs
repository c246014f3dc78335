use std::ops::Mul;

use crate::linalg::{Mat3, Vec3};
use crate::scalar::Real;
use crate::so3::{hat, RotationMatrix};

/// Unit quaternion with vector part `v` and scalar part `s` (Hamilton product).
///
/// The associated rotation is
/// `R = (s² − vᵀv)I + 2vvᵀ + 2s·v^×`, so that `R(p ⊗ q) = R(p)·R(q)`
/// and `q̇ = ½ q ⊗ (ω, 0)` corresponds to `Ṙ = R ω^×`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitQuaternion<T> {
    pub v: Vec3<T>,
    pub s: T,
}

impl<T: Real> UnitQuaternion<T> {
    pub fn identity() -> Self {
        Self {
            v: Vec3::zeros(),
            s: T::one(),
        }
    }

    /// Normalizes `(v, s)`; `None` for the zero quaternion.
    pub fn new_normalize(v: Vec3<T>, s: T) -> Option<Self> {
        let n = (v.norm_squared() + s * s).sqrt();
        if n > T::zero() && n.is_finite() {
            Some(Self {
                v: v * n.recip(),
                s: s / n,
            })
        } else {
            None
        }
    }

    pub fn norm_error(&self) -> T {
        (self.v.norm_squared() + self.s * self.s - T::one()).abs()
    }

    /// Renormalizes to unit length.
    pub fn renormalize(&self) -> Self {
        Self::new_normalize(self.v, self.s).unwrap_or_else(Self::identity)
    }

    /// `exp(u) = (sin|u|·u/|u|, cos|u|)`; a rotation by `2|u|` about `u`.
    pub fn exp(u: &Vec3<T>) -> Self {
        let a = u.norm();
        let sinc = if a < T::lit(1e-8) {
            T::one() - a * a / T::lit(6.0)
        } else {
            a.sin() / a
        };
        Self {
            v: *u * sinc,
            s: a.cos(),
        }
    }

    /// Rotation by `angle` about the unit vector `axis`.
    pub fn from_axis_angle(axis: &Vec3<T>, angle: T) -> Self {
        Self::exp(&(*axis * (angle * T::lit(0.5))))
    }

    pub fn conjugate(&self) -> Self {
        Self {
            v: -self.v,
            s: self.s,
        }
    }

    pub fn to_rotation(&self) -> RotationMatrix<T> {
        let (v, s) = (self.v, self.s);
        let two = T::lit(2.0);
        let m =
            Mat3::identity() * (s * s - v.norm_squared()) + v.outer(&v) * two + hat(&v) * (two * s);
        RotationMatrix::from_matrix_unchecked(m)
    }

    /// Quaternion of a rotation matrix with non-negative scalar part.
    pub fn from_rotation(r: &RotationMatrix<T>) -> Self {
        let m = r.matrix();
        let one = T::one();
        let quarter = T::lit(0.25);
        let tr = m.trace();
        let (v, s) = if tr > T::zero() {
            let w = (tr + one).sqrt() * T::lit(2.0);
            (
                Vec3::new(
                    m[(2, 1)] - m[(1, 2)],
                    m[(0, 2)] - m[(2, 0)],
                    m[(1, 0)] - m[(0, 1)],
                ) * w.recip(),
                quarter * w,
            )
        } else if m[(0, 0)] > m[(1, 1)] && m[(0, 0)] > m[(2, 2)] {
            let w = (one + m[(0, 0)] - m[(1, 1)] - m[(2, 2)]).sqrt() * T::lit(2.0);
            (
                Vec3::new(
                    quarter * w,
                    (m[(0, 1)] + m[(1, 0)]) / w,
                    (m[(0, 2)] + m[(2, 0)]) / w,
                ),
                (m[(2, 1)] - m[(1, 2)]) / w,
            )
        } else if m[(1, 1)] > m[(2, 2)] {
            let w = (one + m[(1, 1)] - m[(0, 0)] - m[(2, 2)]).sqrt() * T::lit(2.0);
            (
                Vec3::new(
                    (m[(0, 1)] + m[(1, 0)]) / w,
                    quarter * w,
                    (m[(1, 2)] + m[(2, 1)]) / w,
                ),
                (m[(0, 2)] - m[(2, 0)]) / w,
            )
        } else {
            let w = (one + m[(2, 2)] - m[(0, 0)] - m[(1, 1)]).sqrt() * T::lit(2.0);
            (
                Vec3::new(
                    (m[(0, 2)] + m[(2, 0)]) / w,
                    (m[(1, 2)] + m[(2, 1)]) / w,
                    quarter * w,
                ),
                (m[(1, 0)] - m[(0, 1)]) / w,
            )
        };
        let q = Self { v, s }.renormalize();
        if q.s < T::zero() {
            Self { v: -q.v, s: -q.s }
        } else {
            q
        }
    }
}

impl<T: Real> Mul for UnitQuaternion<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self {
            v: o.v * self.s + self.v * o.s + self.v.cross(&o.v),
            s: self.s * o.s - self.v.dot(&o.v),
        }
    }
}
