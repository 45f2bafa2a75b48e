//! Generic scalar abstraction.
//!
//! All numerical machinery in this crate is written against [`Float`], a
//! small umbrella trait over `num-traits`, so the same code runs in `f32`
//! and `f64`. Concrete aliases for the common `f64` instantiation live at
//! the crate root.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float as NtFloat, FloatConst, FromPrimitive, NumAssign, Signed};

/// Floating-point scalar: `f32` or `f64`.
///
/// The `Signed + FromPrimitive + Send + Sync` bounds make every `Float`
/// also a `rustfft::FftNum`, so FFT-backed code needs no extra bounds.
pub trait Float:
    NtFloat
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Signed
    + Sum
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Shorthand for lossy conversion of an `f64` constant.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable")
    }

    /// Lossy widening to `f64` (used by exporters and reports).
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }
}

impl Float for f32 {}
impl Float for f64 {}

/// Complex number over the crate scalar.
pub type Cplx<T> = Complex<T>;

/// `0 + 0i`.
#[inline]
pub fn czero<T: Float>() -> Cplx<T> {
    Complex::new(T::zero(), T::zero())
}

/// `1 + 0i`.
#[inline]
pub fn cone<T: Float>() -> Cplx<T> {
    Complex::new(T::one(), T::zero())
}

/// Purely real complex value.
#[inline]
pub fn cre<T: Float>(re: T) -> Cplx<T> {
    Complex::new(re, T::zero())
}

/// `exp(i theta)`.
#[inline]
pub fn cis<T: Float>(theta: T) -> Cplx<T> {
    Complex::new(theta.cos(), theta.sin())
}
