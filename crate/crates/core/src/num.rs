//! Scalar abstraction: all numerics are generic over f32/f64.
//!
//! The stated tolerances (1e-12 trajectory equivalence, 1e-14 round trips)
//! assume f64; f32 instantiations are supported but not calibrated.

use num_traits::{Float, FromPrimitive, NumAssign};

/// Floating-point scalar the library is written against.
pub trait Real:
    Float + FromPrimitive + NumAssign + std::fmt::Debug + std::fmt::Display + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Squared Euclidean norm.
pub fn l2_norm_sq<F: Real>(v: &[F]) -> F {
    v.iter().fold(F::zero(), |acc, &x| acc + x * x)
}

/// True if every component is finite.
pub fn all_finite<F: Real>(v: &[F]) -> bool {
    v.iter().all(|x| x.is_finite())
}
