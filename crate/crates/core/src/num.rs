//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar the solver is generic over (`f32` or `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Admissible scaled residual `|Az - b| / (|A||z| + |b|)` after a direct solve.
    fn residual_tolerance() -> Self;

    /// Slack for the rotation index turning sum to differ from an integer.
    fn turning_tolerance() -> Self;
}

impl Real for f64 {
    fn residual_tolerance() -> Self {
        1e-10
    }

    fn turning_tolerance() -> Self {
        1e-6
    }
}

impl Real for f32 {
    fn residual_tolerance() -> Self {
        1e-4
    }

    fn turning_tolerance() -> Self {
        1e-3
    }
}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(value: f64) -> T {
    T::from_f64(value).expect("f64 literal representable in scalar type")
}

#[inline]
pub(crate) fn to_f64<T: Real>(value: T) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

#[inline]
pub(crate) fn from_usize<T: Real>(value: usize) -> T {
    T::from_usize(value).expect("usize representable in scalar type")
}

pub(crate) fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&p, &q)| acc + p * q)
}

pub(crate) fn norm_sq<T: Real>(a: &[T]) -> T {
    dot(a, a)
}

pub(crate) fn norm<T: Real>(a: &[T]) -> T {
    norm_sq(a).sqrt()
}
