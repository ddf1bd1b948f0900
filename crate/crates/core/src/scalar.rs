//! Scalar abstraction shared by the exact and floating evaluation paths.
//!
//! [`Scalar`] is a real field element that can be built from exact rationals and powers of
//! two. It is implemented by `f32`, `f64`, [`BigRational`] (exact mode) and [`BigFloat`]
//! (extended-exponent floating mode). [`FloatScalar`] adds what iterative numerics need:
//! square roots, precision control and directed rounding for certified bounds.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::bigfloat::{BigFloat, Rounding};
use crate::error::{Error, Result};

/// Largest power-of-two exponent the exact rational type will materialize.
pub const EXACT_POW2_LIMIT: u64 = 1 << 24;

pub trait Scalar:
    Clone + Debug + PartialEq + PartialOrd + Num + Neg<Output = Self> + Send + Sync + 'static
{
    /// Value of `q` rounded to `prec` bits; exact types ignore `prec`.
    fn from_rational(q: &BigRational, prec: u32) -> Result<Self>;

    /// `2^exp`, exact whenever the type can represent it.
    fn pow2(exp: &BigInt, prec: u32) -> Result<Self>;

    fn abs(&self) -> Self;

    fn to_f64(&self) -> f64;

    fn from_integer(v: i64, prec: u32) -> Result<Self> {
        Self::from_rational(&BigRational::from_integer(BigInt::from(v)), prec)
    }
}

pub trait FloatScalar: Scalar {
    fn sqrt(&self) -> Self;

    /// Mantissa bits carried by this value.
    fn precision(&self) -> u32;

    fn with_precision(&self, prec: u32) -> Self;

    /// Sum rounded toward +infinity.
    fn add_up(&self, other: &Self, prec: u32) -> Self;

    /// Product rounded toward +infinity.
    fn mul_up(&self, other: &Self, prec: u32) -> Self;

    /// Exact multiplication by `2^k`.
    fn mul_pow2(&self, k: &BigInt) -> Result<Self>;

    /// Approximate `log2|x|`, `-inf` at zero.
    fn log2_abs(&self) -> f64;

    fn to_decimal(&self, digits: usize) -> String;

    fn from_f64(v: f64, prec: u32) -> Self;

    /// `2^(1-prec)`, the relative spacing at the given precision.
    fn epsilon(prec: u32) -> Self;
}

/// Parse `[+-]digits[.digits][e[+-]digits]` into an exact rational.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("not a decimal number: {s:?}"));
    let t = s.trim();
    let (neg, t) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(p) => (&t[..p], t[p + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (int, frac) = match mant.find('.') {
        Some(p) => (&mant[..p], &mant[p + 1..]),
        None => (mant, ""),
    };
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let m = BigInt::parse_bytes(digits.as_bytes(), 10).ok_or_else(bad)?;
    let scale = exp - frac.len() as i64;
    if scale.unsigned_abs() > 100_000 {
        return Err(Error::Parse(format!("exponent out of range in {s:?}")));
    }
    let ten = BigInt::from(10);
    let mut q = if scale >= 0 {
        BigRational::from_integer(m * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(m, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        q = -q;
    }
    Ok(q)
}

macro_rules! impl_native_float {
    ($t:ty, $mant:expr, $min_exp:expr, $max_exp:expr) => {
        impl Scalar for $t {
            fn from_rational(q: &BigRational, _prec: u32) -> Result<Self> {
                let v = BigFloat::from_rational(q, $mant).to_f64() as $t;
                if v.is_infinite() {
                    Err(Error::Overflow)
                } else if v == 0.0 && !q.is_zero() {
                    Err(Error::Underflow)
                } else {
                    Ok(v)
                }
            }

            fn pow2(exp: &BigInt, _prec: u32) -> Result<Self> {
                match exp.to_i32() {
                    Some(e) if e < $min_exp => Err(Error::Underflow),
                    Some(e) if e > $max_exp => Err(Error::Overflow),
                    Some(e) => Ok((2.0 as $t).powi(e)),
                    None if exp.is_negative() => Err(Error::Underflow),
                    None => Err(Error::Overflow),
                }
            }

            fn abs(&self) -> Self {
                <$t>::abs(*self)
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }
        }

        impl FloatScalar for $t {
            fn sqrt(&self) -> Self {
                <$t>::sqrt(*self)
            }
            fn precision(&self) -> u32 {
                $mant
            }
            fn with_precision(&self, _prec: u32) -> Self {
                *self
            }
            fn add_up(&self, other: &Self, _prec: u32) -> Self {
                (*self + *other).next_up()
            }
            fn mul_up(&self, other: &Self, _prec: u32) -> Self {
                (*self * *other).next_up()
            }
            fn mul_pow2(&self, k: &BigInt) -> Result<Self> {
                if *self == 0.0 {
                    return Ok(0.0);
                }
                let e = k.to_i32().ok_or(if k.is_negative() {
                    Error::Underflow
                } else {
                    Error::Overflow
                })?;
                let h = e / 2;
                let v = *self * (2.0 as $t).powi(h) * (2.0 as $t).powi(e - h);
                if v == 0.0 {
                    Err(Error::Underflow)
                } else if v.is_infinite() {
                    Err(Error::Overflow)
                } else {
                    Ok(v)
                }
            }
            fn log2_abs(&self) -> f64 {
                (*self as f64).abs().log2()
            }
            fn to_decimal(&self, digits: usize) -> String {
                BigFloat::from_f64(*self as f64, $mant).to_decimal(digits)
            }
            fn from_f64(v: f64, _prec: u32) -> Self {
                v as $t
            }
            fn epsilon(_prec: u32) -> Self {
                <$t>::EPSILON
            }
        }
    };
}

impl_native_float!(f64, 53, -1074, 1023);
impl_native_float!(f32, 24, -149, 127);

impl Scalar for BigRational {
    fn from_rational(q: &BigRational, _prec: u32) -> Result<Self> {
        Ok(q.clone())
    }

    fn pow2(exp: &BigInt, _prec: u32) -> Result<Self> {
        let mag = exp.magnitude();
        if *mag > num_bigint::BigUint::from(EXACT_POW2_LIMIT) {
            return Err(Error::ExactTooLarge {
                bits: mag.to_string(),
            });
        }
        let k = mag.to_u64().unwrap_or(0);
        let p = BigInt::one() << k;
        Ok(if exp.is_negative() {
            BigRational::new(BigInt::one(), p)
        } else {
            BigRational::from_integer(p)
        })
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn to_f64(&self) -> f64 {
        BigFloat::from_rational(self, 64).to_f64()
    }
}

impl Scalar for BigFloat {
    fn from_rational(q: &BigRational, prec: u32) -> Result<Self> {
        Ok(BigFloat::from_rational(q, prec))
    }

    fn pow2(exp: &BigInt, prec: u32) -> Result<Self> {
        Ok(BigFloat::pow2(exp.clone(), prec))
    }

    fn abs(&self) -> Self {
        BigFloat::abs(self)
    }

    fn to_f64(&self) -> f64 {
        BigFloat::to_f64(self)
    }
}

impl FloatScalar for BigFloat {
    fn sqrt(&self) -> Self {
        BigFloat::sqrt(self)
    }
    fn precision(&self) -> u32 {
        BigFloat::precision(self)
    }
    fn with_precision(&self, prec: u32) -> Self {
        BigFloat::with_precision(self, prec)
    }
    fn add_up(&self, other: &Self, prec: u32) -> Self {
        self.add_rounded(other, prec, Rounding::Up)
    }
    fn mul_up(&self, other: &Self, prec: u32) -> Self {
        self.mul_rounded(other, prec, Rounding::Up)
    }
    fn mul_pow2(&self, k: &BigInt) -> Result<Self> {
        Ok(BigFloat::mul_pow2(self, k))
    }
    fn log2_abs(&self) -> f64 {
        BigFloat::log2_abs(self)
    }
    fn to_decimal(&self, digits: usize) -> String {
        BigFloat::to_decimal(self, digits)
    }
    fn from_f64(v: f64, prec: u32) -> Self {
        BigFloat::from_f64(v, prec)
    }
    fn epsilon(prec: u32) -> Self {
        BigFloat::pow2(BigInt::from(1 - i64::from(prec)), prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_decimal_forms() {
        let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        assert_eq!(parse_decimal("0.0625").unwrap(), q(1, 16));
        assert_eq!(parse_decimal("-2").unwrap(), q(-2, 1));
        assert_eq!(parse_decimal("1e-3").unwrap(), q(1, 1000));
        assert_eq!(parse_decimal("+.5E1").unwrap(), q(5, 1));
        assert!(parse_decimal("abc").is_err());
        assert!(parse_decimal(".").is_err());
        assert!(parse_decimal("1e").is_err());
    }

    #[test]
    fn native_pow2_reports_underflow() {
        assert_eq!(<f64 as Scalar>::pow2(&BigInt::from(-108), 0).unwrap(), 2f64.powi(-108));
        assert_eq!(<f64 as Scalar>::pow2(&BigInt::from(-27648), 0), Err(Error::Underflow));
        assert_eq!(<f32 as Scalar>::pow2(&BigInt::from(-200), 0), Err(Error::Underflow));
    }

    #[test]
    fn rational_pow2_is_exact_until_limit() {
        let v = <BigRational as Scalar>::pow2(&BigInt::from(-108), 0).unwrap();
        assert_eq!(v.denom().bits(), 109);
        assert!(matches!(
            <BigRational as Scalar>::pow2(&BigInt::from(-86_400_000i64), 0),
            Err(Error::ExactTooLarge { .. })
        ));
    }

    #[test]
    fn native_upward_ops_bound_exact() {
        let third = 1.0f64 / 3.0;
        let s = third.add_up(&third, 53);
        assert!(s >= 2.0 / 3.0);
        assert!(0.1f64.mul_up(&0.1, 53) > 0.1 * 0.1);
    }
}
