//! Scalar abstraction shared by the numeric modules.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating point type the metrics and fits are computed in: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
}

/// Converts an `f64` constant into `T`.
#[inline]
pub(crate) fn lit<T: Scalar>(v: f64) -> T {
    T::from_f64(v).expect("f64 constant representable in scalar type")
}

#[inline]
pub(crate) fn from_usize<T: Scalar>(v: usize) -> T {
    T::from_usize(v).expect("count representable in scalar type")
}

#[inline]
pub(crate) fn from_u64<T: Scalar>(v: u64) -> T {
    T::from_u64(v).expect("integer representable in scalar type")
}
