//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type the library can run on: `f32` or `f64`.
///
/// Tolerances quoted throughout the crate are tuned for `f64`; on `f32`
/// they are floored by [`Scalar::tolerance`] to a multiple of machine
/// epsilon.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Sum + Send + Sync + 'static
{
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// Converts an unsigned count into the scalar type.
    #[inline]
    fn count(n: u64) -> Self {
        Self::from_u64(n).expect("count representable in scalar type")
    }

    /// A requested tolerance, floored at `256·ε` for the scalar type.
    #[inline]
    fn tolerance(requested: f64) -> Self {
        Self::lit(requested).max(Self::lit(256.0) * Self::epsilon())
    }

    /// Lossy conversion used for reports and serialization.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `k!` as a scalar.
pub(crate) fn factorial<T: Scalar>(k: u32) -> T {
    (1..=k).fold(T::one(), |acc, j| acc * T::count(j as u64))
}

/// Hölder conjugate of `p`; `1` when `p` is infinite.
pub fn conjugate_exponent<T: Scalar>(p: T) -> T {
    if p.is_infinite() {
        T::one()
    } else {
        p / (p - T::one())
    }
}
