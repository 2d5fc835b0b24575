//! Scalar abstractions.
//!
//! Parameter maps and remainders are polynomial in the model parameters, so
//! they only need field arithmetic ([`Field`]) and run unchanged on exact
//! rationals. Anything that evaluates a transcendental prepotential needs
//! [`Real`].

use std::fmt::Debug;
use std::iter::Sum;
use std::ops::Neg;

use num_traits::{Float, FloatConst, FromPrimitive, Num};

/// Ordered field: enough structure for parameter maps and energy chains.
pub trait Field: Copy + Debug + PartialOrd + Num + Neg<Output = Self> + Send + Sync + 'static {
    fn from_i32(n: i32) -> Self {
        let mut acc = Self::zero();
        let one = if n < 0 { -Self::one() } else { Self::one() };
        for _ in 0..n.unsigned_abs() {
            acc = acc + one;
        }
        acc
    }

    fn half() -> Self {
        Self::one() / (Self::one() + Self::one())
    }
}

impl<T> Field for T where T: Copy + Debug + PartialOrd + Num + Neg<Output = T> + Send + Sync + 'static {}

/// Floating-point scalar (f32 or f64).
pub trait Real: Field + Float + FloatConst + FromPrimitive + Sum {}

impl<T> Real for T where T: Field + Float + FloatConst + FromPrimitive + Sum {}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    #[test]
    fn field_from_i32_matches_native() {
        assert_eq!(<f64 as Field>::from_i32(-7), -7.0);
        assert_eq!(<Ratio<i64> as Field>::from_i32(5), Ratio::from_integer(5));
        assert_eq!(<Ratio<i64> as Field>::half(), Ratio::new(1, 2));
    }

    #[test]
    fn lit_roundtrips_in_f32() {
        let x: f32 = lit(0.25);
        assert_eq!(x, 0.25f32);
        assert_eq!(to_f64(x), 0.25);
    }
}
