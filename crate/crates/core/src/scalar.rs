//! Scalar abstractions.
//!
//! Symbolic work (polynomials, rotation determinants) only needs ring
//! operations and runs over any [`Scalar`], including exact rationals.
//! Numerical work (root finding, integration, return maps) needs a
//! floating-point [`Real`].

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, Num, ToPrimitive};

/// Ring-like coefficient type.
pub trait Scalar:
    Num + Clone + PartialEq + Debug + std::ops::Neg<Output = Self> + Send + Sync + 'static
{
    /// `n` as a scalar, built by repeated addition of one.
    fn from_count(n: usize) -> Self {
        let mut acc = Self::zero();
        for _ in 0..n {
            acc = acc + Self::one();
        }
        acc
    }
}

impl<T> Scalar for T where
    T: Num + Clone + PartialEq + Debug + std::ops::Neg<Output = T> + Send + Sync + 'static
{
}

/// Floating-point scalar used by the numerical modules.
pub trait Real: Scalar + Float + FloatConst + FromPrimitive + ToPrimitive + Display + Copy {
    /// Converts an `f64` literal; panics only for types that cannot hold it,
    /// which does not happen for `f32`/`f64`.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}
