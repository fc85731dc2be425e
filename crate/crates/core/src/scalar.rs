//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! All physics is written once against [`Real`]; `f64` is the working
//! precision and `f32` is supported for the cheaper routines. Closed-form
//! ladders that only need field operations are generic over
//! [`num_traits::Num`] instead, so they also evaluate exactly over rationals.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, Num, NumAssign, ToPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + NumAssign
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + LowerExp
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
    /// Literal conversion. Every `f64` literal fits in both supported types.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn of_i64(n: i64) -> Self {
        Self::from_i64(n).expect("i64 representable")
    }

    /// A tolerance of `x`, floored at a few ulps of the working precision.
    #[inline]
    fn tol(x: f64) -> Self {
        Self::of(x).max(Self::epsilon() * Self::of(64.0))
    }

    #[inline]
    fn two_pi() -> Self {
        Self::TAU()
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub type C<T> = Complex<T>;

#[inline]
pub fn cplx<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub fn re<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

/// `e^{i theta}`.
#[inline]
pub fn cis<T: Real>(theta: T) -> C<T> {
    Complex::from_polar(T::one(), theta)
}

/// Reduce an angle into `[0, 2 pi)`.
pub fn wrap_angle<T: Real>(alpha: T) -> T {
    let tau = T::two_pi();
    let r = alpha % tau;
    let r = if r < T::zero() { r + tau } else { r };
    if r >= tau {
        T::zero()
    } else {
        r
    }
}

/// Integer `k` as an element of any numeric field, built from `one()` only so
/// that exact types such as `Ratio<i64>` qualify.
pub fn integer<F: Num + Copy>(k: i64) -> F {
    let mut acc = F::zero();
    let mut unit = F::one();
    let mut m = k.unsigned_abs();
    while m > 0 {
        if m & 1 == 1 {
            acc = acc + unit;
        }
        unit = unit + unit;
        m >>= 1;
    }
    if k < 0 {
        F::zero() - acc
    } else {
        acc
    }
}
