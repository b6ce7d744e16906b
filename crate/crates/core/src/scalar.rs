//! Scalar abstraction for pyramid arithmetic.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Real sample type used by images, kernels and pyramids.
///
/// Implemented for `f32` (the default working precision) and `f64`.
pub trait Scalar:
    Float + NumAssign + FromPrimitive + ToPrimitive + Default + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` literal, panicking only if `Self` cannot represent
    /// finite doubles at all.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("scalar type cannot represent f64 literal")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Tolerance used when validating kernel properties.
    fn kernel_tolerance() -> Self;
}

impl Scalar for f32 {
    fn kernel_tolerance() -> Self {
        1e-6
    }
}

impl Scalar for f64 {
    fn kernel_tolerance() -> Self {
        1e-12
    }
}
