//! Scalar abstraction for the Chebyshev layer.
//!
//! The grid, transform, and norm machinery is written against [`Scalar`] so it
//! works for `f32` and `f64` alike; the solver and certification layers are
//! `f64`-only because they lean on LAPACK and on double-precision constants.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use std::fmt::Debug;
use std::iter::Sum;

/// Real scalar type the Chebyshev core is generic over: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + NumAssign + Sum + rustfft::FftNum + Debug + 'static
{
    /// Shorthand for a literal lifted into the scalar type.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    fn usize(n: usize) -> Self {
        Self::from_usize(n).expect("index representable in scalar type")
    }
}

impl<T> Scalar for T where
    T: Float + FloatConst + FromPrimitive + NumAssign + Sum + rustfft::FftNum + Debug + 'static
{
}

/// Complex number over the generic scalar.
pub type Cplx<R> = Complex<R>;
