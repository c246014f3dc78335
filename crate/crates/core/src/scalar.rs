//! Scalar abstraction shared by the geometry and filter code.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar the estimators are generic over: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        // Every finite f64 converts (possibly rounded) into f32/f64.
        Self::from_f64(x).expect("finite literal")
    }

    /// A tolerance of `t` clamped from below by a few dozen ULPs of this type.
    ///
    /// Thresholds such as `1e-9` are meaningful for `f64` but not for `f32`;
    /// this keeps checks usable on both.
    #[inline]
    fn tol(t: f64) -> Self {
        let floor = Self::epsilon() * Self::lit(64.0);
        Self::lit(t).max(floor)
    }
}

impl Real for f32 {}
impl Real for f64 {}
