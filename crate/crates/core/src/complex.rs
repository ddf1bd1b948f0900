//! Complex helpers over [`Scalar`] / [`FloatScalar`] parts.

use num_complex::Complex;
use num_rational::BigRational;

use crate::error::Result;
use crate::scalar::{FloatScalar, Scalar};
use crate::GaussianRational;

pub fn from_gaussian<T: Scalar>(q: &GaussianRational, prec: u32) -> Result<Complex<T>> {
    Ok(Complex::new(
        T::from_rational(&q.re, prec)?,
        T::from_rational(&q.im, prec)?,
    ))
}

pub fn from_rational_parts<T: Scalar>(re: &BigRational, im: &BigRational, prec: u32) -> Result<Complex<T>> {
    Ok(Complex::new(T::from_rational(re, prec)?, T::from_rational(im, prec)?))
}

pub fn real<T: Scalar>(v: T) -> Complex<T> {
    Complex::new(v, T::zero())
}

/// `|re| + |im|`, an upper bound on the modulus that needs no square root.
pub fn abs_l1<T: Scalar>(z: &Complex<T>) -> T {
    z.re.abs() + z.im.abs()
}

pub fn abs<T: FloatScalar>(z: &Complex<T>) -> T {
    (z.re.clone() * z.re.clone() + z.im.clone() * z.im.clone()).sqrt()
}

pub fn norm_sqr<T: Scalar>(z: &Complex<T>) -> T {
    z.re.clone() * z.re.clone() + z.im.clone() * z.im.clone()
}

/// Euclidean norm of a complex vector.
pub fn norm2<T: FloatScalar>(v: &[Complex<T>]) -> T {
    v.iter()
        .fold(T::zero(), |acc, z| acc + norm_sqr(z))
        .sqrt()
}

/// Max-modulus norm.
pub fn norm_inf<T: FloatScalar>(v: &[Complex<T>]) -> T {
    v.iter().map(abs).fold(T::zero(), |m, a| if a > m { a } else { m })
}

/// Upper bound on the max-modulus norm, rounded upward.
pub fn norm_inf_upper<T: FloatScalar>(v: &[Complex<T>], prec: u32) -> T {
    v.iter()
        .map(|z| z.re.abs().add_up(&z.im.abs(), prec))
        .fold(T::zero(), |m, a| if a > m { a } else { m })
}

pub fn sub_vec<T: Scalar>(a: &[Complex<T>], b: &[Complex<T>]) -> Vec<Complex<T>> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn with_precision<T: FloatScalar>(z: &Complex<T>, prec: u32) -> Complex<T> {
    Complex::new(z.re.with_precision(prec), z.im.with_precision(prec))
}

pub fn is_zero<T: Scalar>(z: &Complex<T>) -> bool {
    z.re.is_zero() && z.im.is_zero()
}
