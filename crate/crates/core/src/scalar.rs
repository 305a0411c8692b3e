//! Floating-point scalar abstraction shared by the state-vector executor,
//! the simulators and the walk module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar type the numerical core is generic over (`f32` or `f64`).
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant, panicking only if the type cannot represent it.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("scalar literal out of range")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Complex amplitude over a [`Scalar`].
pub type Amplitude<T> = Complex<T>;

/// Squared modulus without the `sqrt` round trip.
#[inline]
pub fn norm_sqr<T: Scalar>(a: Amplitude<T>) -> T {
    a.re * a.re + a.im * a.im
}
