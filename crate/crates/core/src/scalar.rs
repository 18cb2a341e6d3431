//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt;

use nalgebra::{ComplexField, DMatrix, RealField};
use num_complex::Complex;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real floating point scalar: `f32` or `f64`.
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + fmt::Display + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex scalar over a [`Real`].
pub type C<T> = Complex<T>;
/// Dense real matrix.
pub type RMat<T> = DMatrix<T>;
/// Dense complex matrix.
pub type CMat<T> = DMatrix<Complex<T>>;

/// Converts an `f64` literal into the working precision.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    nalgebra::convert(x)
}

/// `tol`, raised to a few hundred ulps of `T` for an `n x n` matrix product
/// so that single precision is not held to double-precision thresholds.
pub(crate) fn precision_tol<T: Real>(tol: f64, n: usize) -> T {
    lit::<T>(tol).max(T::default_epsilon() * lit(64.0 * n.max(1) as f64))
}

#[inline]
pub(crate) fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[inline]
pub(crate) fn cr<T: Real>(re: T) -> C<T> {
    Complex::new(re, T::zero())
}

#[inline]
pub(crate) fn ci<T: Real>(im: T) -> C<T> {
    Complex::new(T::zero(), im)
}

#[inline]
pub(crate) fn cexp<T: Real>(z: C<T>) -> C<T> {
    ComplexField::exp(z)
}

#[inline]
pub(crate) fn csqrt<T: Real>(z: C<T>) -> C<T> {
    ComplexField::sqrt(z)
}

#[inline]
pub(crate) fn ccos<T: Real>(z: C<T>) -> C<T> {
    ComplexField::cos(z)
}

#[inline]
pub(crate) fn cabs<T: Real>(z: C<T>) -> T {
    z.re.hypot(z.im)
}

#[inline]
pub(crate) fn carg<T: Real>(z: C<T>) -> T {
    z.im.atan2(z.re)
}

/// `sin(z)/z` with the removable singularity filled in.
pub(crate) fn csinc<T: Real>(z: C<T>) -> C<T> {
    if cabs(z) < lit(1e-4) {
        // 1 - z^2/6 + z^4/120 is exact to working precision here
        let z2 = z * z;
        cr::<T>(T::one()) - z2 / cr(lit(6.0)) + z2 * z2 / cr(lit(120.0))
    } else {
        ComplexField::sin(z) / z
    }
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_phase<T: Real>(phi: T) -> T {
    let two_pi = T::two_pi();
    let mut w = phi - two_pi * (phi / two_pi).round();
    if w <= -T::pi() {
        w += two_pi;
    } else if w > T::pi() {
        w -= two_pi;
    }
    w
}

pub(crate) fn max_abs<T: Real>(m: &RMat<T>) -> T {
    m.iter().fold(T::zero(), |acc, v| acc.max(v.abs()))
}

pub(crate) fn cmax_abs<T: Real>(m: &CMat<T>) -> T {
    m.iter().fold(T::zero(), |acc, v| acc.max(cabs(*v)))
}

pub(crate) fn to_complex<T: Real>(m: &RMat<T>) -> CMat<T> {
    m.map(cr)
}

pub(crate) fn all_finite<T: Real>(m: &RMat<T>) -> bool {
    m.iter().all(|v| v.is_finite())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_keeps_principal_interval() {
        let pi = std::f64::consts::PI;
        assert_eq!(wrap_phase(pi), pi);
        assert!((wrap_phase(-pi) - pi).abs() < 1e-15);
        assert!((wrap_phase(3.0 * pi + 0.1) - (-pi + 0.1)).abs() < 1e-12);
        assert!((wrap_phase(0.3_f64) - 0.3).abs() < 1e-16);
    }

    #[test]
    fn sinc_is_smooth_through_zero() {
        let small = csinc(C::new(1e-5_f64, 0.0));
        let direct = (1e-5_f64).sin() / 1e-5;
        assert!((small.re - direct).abs() < 1e-15);
        let imag = csinc(C::new(0.0, 2.0_f64));
        assert!((imag.re - (2.0_f64).sinh() / 2.0).abs() < 1e-14);
        assert!(imag.im.abs() < 1e-15);
    }
}
