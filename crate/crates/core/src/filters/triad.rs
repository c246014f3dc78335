//! TRIAD: attitude from two non-collinear direction pairs, without memory.

use crate::linalg::{Mat3, Vec3};
use crate::scalar::Real;
use crate::so3::RotationMatrix;

use super::FilterError;

/// Minimum `|a × b|` (of the normalized pair) for a usable direction pair.
pub const MIN_CROSS_NORM: f64 = 1e-6;

fn triad_frame<T: Real>(a: &Vec3<T>, b: &Vec3<T>) -> Result<Mat3<T>, FilterError> {
    let degenerate = |c: T| FilterError::DegenerateDirections {
        cross_norm: c.to_f64().unwrap_or(f64::NAN),
    };
    let t1 = a.try_normalize().ok_or_else(|| degenerate(T::zero()))?;
    let b = b.try_normalize().ok_or_else(|| degenerate(T::zero()))?;
    let c = t1.cross(&b);
    let cross_norm = c.norm();
    if !(cross_norm > T::lit(MIN_CROSS_NORM)) {
        return Err(degenerate(cross_norm));
    }
    let t2 = c * cross_norm.recip();
    let t3 = t1.cross(&t2);
    Ok(Mat3::from_cols(t1, t2, t3))
}

/// Rotation `R̂` with `R̂ᵀ r_i ≈ y_i`, anchored on the first pair.
///
/// `y1` is matched exactly (up to normalization); `y2` only fixes the
/// rotation about it. Noisy measurements are normalized before use.
pub fn triad_estimate<T: Real>(
    y1: &Vec3<T>,
    y2: &Vec3<T>,
    r1: &Vec3<T>,
    r2: &Vec3<T>,
) -> Result<RotationMatrix<T>, FilterError> {
    let body = triad_frame(y1, y2)?;
    let reference = triad_frame(r1, r2)?;
    // R̂ᵀ · reference = body  ⇒  R̂ = reference · bodyᵀ
    Ok(RotationMatrix::from_matrix_unchecked(
        reference * body.transpose(),
    ))
}
