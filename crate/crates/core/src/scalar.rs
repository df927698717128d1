//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! All math is written against [`Real`], which `f32` and `f64` both satisfy.
//! Complex quantities are `Complex<T>` over the same real type.

use nalgebra::{Complex, DMatrix, DVector, RealField};
use num_traits::ToPrimitive;

/// Real field usable as the base scalar of the crate (`f32`, `f64`).
pub trait Real: RealField + Copy + ToPrimitive + Send + Sync + 'static {}

impl<T> Real for T where T: RealField + Copy + ToPrimitive + Send + Sync + 'static {}

/// Complex scalar over `T`.
pub type C<T> = Complex<T>;
/// Dense complex matrix; used for endomorphisms, metrics and curvature operators.
pub type CMatrix<T> = DMatrix<Complex<T>>;
/// Dense complex column vector.
pub type CVector<T> = DVector<Complex<T>>;

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    nalgebra::convert(x)
}

/// A relative tolerance no tighter than a thousand units of roundoff in `T`,
/// so that `f64` thresholds stay meaningful in single precision.
#[inline]
pub fn rel_tol<T: Real>(x: f64) -> T {
    lit::<T>(x).max(T::default_epsilon() * lit(1e3))
}

/// Converts `T` back to `f64` (used for reporting only).
#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[inline]
pub fn cplx<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub fn czero<T: Real>() -> C<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub fn cone<T: Real>() -> C<T> {
    Complex::new(T::one(), T::zero())
}

#[inline]
pub fn creal<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}
