//! Scalar abstractions: `Real` for floating-point code paths and `Coeff`
//! for the coefficient rings of the exact algebra.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, One, ToPrimitive, Zero};

/// Floating-point scalar used by the numeric kernels.
pub trait Real:
    Float + FloatConst + FromPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).unwrap()
    }

    fn from_usize_(v: usize) -> Self {
        Self::from_usize(v).unwrap()
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Coefficient ring for polynomials and the exponential-polynomial ring.
pub trait Coeff:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_i64(v: i64) -> Self;
    fn approx_f64(&self) -> f64;
}

/// A coefficient ring that is a field.
pub trait FieldCoeff: Coeff + Div<Output = Self> {}

impl Coeff for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn approx_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}
impl FieldCoeff for BigRational {}

impl Coeff for f64 {
    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn approx_f64(&self) -> f64 {
        *self
    }
}
impl FieldCoeff for f64 {}

impl Coeff for f32 {
    fn from_i64(v: i64) -> Self {
        v as f32
    }

    fn approx_f64(&self) -> f64 {
        *self as f64
    }
}
impl FieldCoeff for f32 {}

/// Shorthand for an integer-valued rational.
pub fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Shorthand for `num/den`.
pub fn qf(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
