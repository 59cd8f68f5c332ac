//! Numeric abstractions shared by the whole crate.
//!
//! [`Scalar`] is the plain floating point type everything is generic over
//! (`f32` or `f64`). [`Smooth`] is the smaller algebra of smooth operations
//! the closed-form solutions and the network forward pass need; it is
//! implemented by every [`Scalar`] and by the truncated Taylor [`Jet`], so the
//! same generic code yields either a value or a value plus its partial
//! derivatives.
//!
//! [`Jet`]: crate::jet::Jet

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating point scalar used for data, parameters and regression.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Sum
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal. Never fails for the implemented types.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal is representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Smooth arithmetic: the operations a closed-form field or a tanh network
/// is built from.
pub trait Smooth<T: Scalar>:
    Clone
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<T, Output = Self>
    + Sub<T, Output = Self>
    + Mul<T, Output = Self>
    + Div<T, Output = Self>
{
    /// Value part (the zeroth-order coefficient for a jet).
    fn value(&self) -> T;
    /// Same shape as `self`, holding the constant `c`.
    fn constant_like(&self, c: T) -> Self;

    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn tanh(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn recip(&self) -> Self;

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }
}

impl<T: Scalar> Smooth<T> for T {
    #[inline]
    fn value(&self) -> T {
        *self
    }
    #[inline]
    fn constant_like(&self, c: T) -> Self {
        c
    }
    #[inline]
    fn exp(&self) -> Self {
        Float::exp(*self)
    }
    #[inline]
    fn ln(&self) -> Self {
        Float::ln(*self)
    }
    #[inline]
    fn sin(&self) -> Self {
        Float::sin(*self)
    }
    #[inline]
    fn cos(&self) -> Self {
        Float::cos(*self)
    }
    #[inline]
    fn tanh(&self) -> Self {
        Float::tanh(*self)
    }
    #[inline]
    fn sqrt(&self) -> Self {
        Float::sqrt(*self)
    }
    #[inline]
    fn recip(&self) -> Self {
        Float::recip(*self)
    }
}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Scalar>(v: f64) -> T {
    T::lit(v)
}
