//! Scalar abstraction: the whole crate is generic over the working
//! floating-point type through [`Real`].

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar the simulator can run on: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Sum
    + LowerExp
    + Display
    + Debug
    + Send
    + Sync
    + 'static
{
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + NumAssign
        + Sum
        + LowerExp
        + Display
        + Debug
        + Send
        + Sync
        + 'static
{
}

/// Convert an `f64` literal to the working scalar type.
///
/// Panics only if the target type cannot represent ordinary literals, which
/// no [`Real`] implementor does.
#[inline]
pub fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal must be representable")
}
