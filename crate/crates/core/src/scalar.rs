use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, NumCast};

/// Floating point scalar the numeric kernels are written against: `f32` or `f64`.
///
/// Besides the arithmetic bounds, each type supplies the relative thresholds
/// that depend on its precision.
pub trait Scalar:
    Float + FromPrimitive + NumCast + FromStr + Display + Debug + LowerExp + Sum + Send + Sync + 'static
{
    /// Relative Jacobi stopping threshold, scaled by `‖S‖_max`.
    fn jacobi_tolerance() -> Self;
    /// `σ_k ≤ rank_tolerance · σ₁` counts as numerically zero.
    fn rank_tolerance() -> Self;
    /// `σ_k − σ_{k+1} ≤ tie_tolerance · σ₁` counts as a near-tie.
    fn tie_tolerance() -> Self;
    /// Accepted deviation of an orthogonal input from orthogonality.
    fn orthogonality_tolerance() -> Self;
    /// Accepted asymmetry of a symmetric input, scaled by `max(1, ‖S‖_max)`.
    fn symmetry_tolerance() -> Self;

    fn of(x: f64) -> Self {
        <Self as NumCast>::from(x).expect("f64 is representable in every scalar")
    }

    fn to_f64_lossy(self) -> f64 {
        <f64 as NumCast>::from(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn jacobi_tolerance() -> Self {
        1e-12
    }
    fn rank_tolerance() -> Self {
        1e-10
    }
    fn tie_tolerance() -> Self {
        1e-6
    }
    fn orthogonality_tolerance() -> Self {
        1e-8
    }
    fn symmetry_tolerance() -> Self {
        1e-12
    }
}

impl Scalar for f32 {
    fn jacobi_tolerance() -> Self {
        1e-6
    }
    fn rank_tolerance() -> Self {
        1e-3
    }
    fn tie_tolerance() -> Self {
        1e-3
    }
    fn orthogonality_tolerance() -> Self {
        1e-4
    }
    fn symmetry_tolerance() -> Self {
        1e-6
    }
}
