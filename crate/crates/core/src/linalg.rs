//! Fixed-size 3-vectors and 3×3 matrices.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use crate::scalar::Real;

/// A 3-vector. Units depend on use: rad/s for rates, dimensionless for directions.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Vec3<T> {
    #[inline]
    pub const fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    #[inline]
    pub fn zeros() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn unit_x() -> Self {
        Self::new(T::one(), T::zero(), T::zero())
    }

    pub fn unit_y() -> Self {
        Self::new(T::zero(), T::one(), T::zero())
    }

    pub fn unit_z() -> Self {
        Self::new(T::zero(), T::zero(), T::one())
    }

    pub fn from_array(a: [T; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    #[inline]
    pub fn dot(&self, o: &Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn cross(&self, o: &Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    #[inline]
    pub fn norm_squared(&self) -> T {
        self.dot(self)
    }

    #[inline]
    pub fn norm(&self) -> T {
        self.norm_squared().sqrt()
    }

    /// Returns `None` for the zero vector.
    pub fn try_normalize(&self) -> Option<Self> {
        let n = self.norm();
        if n > T::zero() && n.is_finite() {
            Some(*self * n.recip())
        } else {
            None
        }
    }

    pub fn max_abs(&self) -> T {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Outer product `self · otherᵀ`.
    pub fn outer(&self, o: &Self) -> Mat3<T> {
        let a = self.to_array();
        let b = o.to_array();
        Mat3::from_fn(|i, j| a[i] * b[j])
    }

    pub fn cast<U: Real>(self) -> Vec3<U> {
        let c = |v: T| U::from_f64(v.to_f64().unwrap_or(f64::NAN)).unwrap_or(U::nan());
        Vec3::new(c(self.x), c(self.y), c(self.z))
    }
}

impl<T> Index<usize> for Vec3<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }
}

impl<T> IndexMut<usize> for Vec3<T> {
    fn index_mut(&mut self, i: usize) -> &mut T {
        match i {
            0 => &mut self.x,
            1 => &mut self.y,
            2 => &mut self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }
}

impl<T: Real> Add for Vec3<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> AddAssign for Vec3<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Real> Sub for Vec3<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Real> SubAssign for Vec3<T> {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<T: Real> Neg for Vec3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl<T: Real> Mul<T> for Vec3<T> {
    type Output = Self;
    #[inline]
    fn mul(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

/// A 3×3 matrix stored row-major: `m[row][col]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mat3<T> {
    pub m: [[T; 3]; 3],
}

impl<T: Real> Mat3<T> {
    pub const fn from_rows_array(m: [[T; 3]; 3]) -> Self {
        Self { m }
    }

    #[inline]
    pub fn from_fn(mut f: impl FnMut(usize, usize) -> T) -> Self {
        Self {
            m: [
                [f(0, 0), f(0, 1), f(0, 2)],
                [f(1, 0), f(1, 1), f(1, 2)],
                [f(2, 0), f(2, 1), f(2, 2)],
            ],
        }
    }

    pub fn zeros() -> Self {
        Self::from_fn(|_, _| T::zero())
    }

    pub fn identity() -> Self {
        Self::from_diagonal(T::one(), T::one(), T::one())
    }

    pub fn from_diagonal(a: T, b: T, c: T) -> Self {
        let d = [a, b, c];
        Self::from_fn(|i, j| if i == j { d[i] } else { T::zero() })
    }

    pub fn from_rows(r0: Vec3<T>, r1: Vec3<T>, r2: Vec3<T>) -> Self {
        Self {
            m: [r0.to_array(), r1.to_array(), r2.to_array()],
        }
    }

    pub fn from_cols(c0: Vec3<T>, c1: Vec3<T>, c2: Vec3<T>) -> Self {
        Self::from_rows(c0, c1, c2).transpose()
    }

    pub fn row(&self, i: usize) -> Vec3<T> {
        Vec3::from_array(self.m[i])
    }

    pub fn col(&self, j: usize) -> Vec3<T> {
        Vec3::new(self.m[0][j], self.m[1][j], self.m[2][j])
    }

    pub fn diagonal(&self) -> Vec3<T> {
        Vec3::new(self.m[0][0], self.m[1][1], self.m[2][2])
    }

    #[inline]
    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.m[j][i])
    }

    #[inline]
    pub fn trace(&self) -> T {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    pub fn determinant(&self) -> T {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// Transposed cofactor matrix, so that `self · adjugate = det · I`.
    pub fn adjugate(&self) -> Self {
        let m = &self.m;
        let c = |r0: usize, r1: usize, c0: usize, c1: usize| {
            m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]
        };
        Self {
            m: [
                [c(1, 2, 1, 2), -c(0, 2, 1, 2), c(0, 1, 1, 2)],
                [-c(1, 2, 0, 2), c(0, 2, 0, 2), -c(0, 1, 0, 2)],
                [c(1, 2, 0, 1), -c(0, 2, 0, 1), c(0, 1, 0, 1)],
            ],
        }
    }

    /// Inverse via the adjugate; `None` when the determinant is zero or not finite.
    pub fn try_inverse(&self) -> Option<Self> {
        let det = self.determinant();
        if det == T::zero() || !det.is_finite() {
            return None;
        }
        Some(self.adjugate() * det.recip())
    }

    pub fn frobenius_norm(&self) -> T {
        self.m
            .iter()
            .flatten()
            .fold(T::zero(), |acc, &v| acc + v * v)
            .sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.m
            .iter()
            .flatten()
            .fold(T::zero(), |acc, &v| acc.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|v| v.is_finite())
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self::from_fn(|i, j| f(self.m[i][j]))
    }

    pub fn cast<U: Real>(&self) -> Mat3<U> {
        Mat3::from_fn(|i, j| {
            U::from_f64(self.m[i][j].to_f64().unwrap_or(f64::NAN)).unwrap_or(U::nan())
        })
    }
}

impl<T> Index<(usize, usize)> for Mat3<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.m[i][j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat3<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.m[i][j]
    }
}

impl<T: Real> Add for Mat3<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::from_fn(|i, j| self.m[i][j] + o.m[i][j])
    }
}

impl<T: Real> AddAssign for Mat3<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Real> Sub for Mat3<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::from_fn(|i, j| self.m[i][j] - o.m[i][j])
    }
}

impl<T: Real> SubAssign for Mat3<T> {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<T: Real> Neg for Mat3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|v| -v)
    }
}

impl<T: Real> Mul<T> for Mat3<T> {
    type Output = Self;
    #[inline]
    fn mul(self, s: T) -> Self {
        self.map(|v| v * s)
    }
}

impl<T: Real> Mul for Mat3<T> {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        Self::from_fn(|i, j| {
            self.m[i][0] * o.m[0][j] + self.m[i][1] * o.m[1][j] + self.m[i][2] * o.m[2][j]
        })
    }
}

impl<T: Real> Mul<Vec3<T>> for Mat3<T> {
    type Output = Vec3<T>;
    #[inline]
    fn mul(self, v: Vec3<T>) -> Vec3<T> {
        Vec3::new(
            self.row(0).dot(&v),
            self.row(1).dot(&v),
            self.row(2).dot(&v),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_product_matches_hand_values() {
        let v = Vec3::new(1.0, 2.0, 3.0);
        let w = Vec3::new(4.0, 5.0, 6.0);
        assert_eq!(v.cross(&w), Vec3::new(-3.0, 6.0, -3.0));
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let a = Mat3::from_rows_array([[4.0, 1.0, 0.5], [1.0, 3.0, 0.2], [0.5, 0.2, 2.0]]);
        let inv = a.try_inverse().unwrap();
        assert!((a * inv - Mat3::identity()).max_abs() < 1e-14);
        assert!(Mat3::<f64>::zeros().try_inverse().is_none());
    }

    #[test]
    fn determinant_of_diagonal() {
        assert_eq!(Mat3::from_diagonal(2.0, 3.0, 4.0).determinant(), 24.0);
    }

    #[test]
    fn rows_and_columns() {
        let a = Mat3::from_rows(
            Vec3::new(1.0, 2.0, 3.0),
            Vec3::new(4.0, 5.0, 6.0),
            Vec3::new(7.0, 8.0, 9.0),
        );
        assert_eq!(a.col(1), Vec3::new(2.0, 5.0, 8.0));
        assert_eq!(Mat3::from_cols(a.col(0), a.col(1), a.col(2)), a);
        assert_eq!(a.trace(), 15.0);
    }
}
