//! Binary floating point with an arbitrary-precision mantissa and an unbounded exponent.
//!
//! A value is `(-1)^neg * mant * 2^exp` with `mant` odd (or zero) and `exp` a [`BigInt`], so
//! quantities such as `2^-86400000` are ordinary values rather than underflows. Every value
//! carries the precision (in mantissa bits) it was rounded to. Binary operations round to the
//! larger precision of their operands, to nearest with ties to even. Precision `0` marks an
//! exact constant (`zero()`, `one()`); sums and products of exact constants stay exact, while
//! quotients and square roots of exact constants round at [`DEFAULT_PRECISION`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

pub const DEFAULT_PRECISION: u32 = 256;

/// Rounding direction for the explicit-rounding entry points.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Nearest,
    /// Toward +infinity.
    Up,
    /// Toward -infinity.
    Down,
}

#[derive(Clone)]
pub struct BigFloat {
    neg: bool,
    mant: BigUint,
    exp: BigInt,
    prec: u32,
}

fn round_parts(
    neg: bool,
    mant: BigUint,
    exp: BigInt,
    sticky: bool,
    prec: u32,
    mode: Rounding,
) -> BigFloat {
    if mant.is_zero() {
        debug_assert!(!sticky, "sticky bit without mantissa");
        return BigFloat::zero_with_prec(prec);
    }
    let (mut mant, mut exp) = (mant, exp);
    if prec > 0 {
        let mut bits = mant.bits();
        if sticky && bits <= u64::from(prec) {
            let pad = u64::from(prec) + 2 - bits;
            mant <<= pad;
            exp -= BigInt::from(pad);
            bits = mant.bits();
        }
        if bits > u64::from(prec) {
            let shift = bits - u64::from(prec);
            let half = mant.bit(shift - 1);
            let tz = mant.trailing_zeros().unwrap_or(0);
            let lower = sticky || tz < shift - 1;
            let inexact = half || lower;
            let mut kept = &mant >> shift;
            let round_up = match mode {
                Rounding::Nearest => half && (lower || kept.bit(0)),
                Rounding::Up => inexact && !neg,
                Rounding::Down => inexact && neg,
            };
            if round_up {
                kept += 1u32;
            }
            mant = kept;
            exp += BigInt::from(shift);
        }
    }
    let tz = mant.trailing_zeros().unwrap_or(0);
    if tz > 0 {
        mant >>= tz;
        exp += BigInt::from(tz);
    }
    BigFloat {
        neg,
        mant,
        exp,
        prec,
    }
}

/// Correctly rounded `(-1)^neg * num / den * 2^exp`.
fn round_ratio(
    neg: bool,
    num: &BigUint,
    den: &BigUint,
    exp: BigInt,
    prec: u32,
    mode: Rounding,
) -> BigFloat {
    assert!(!den.is_zero(), "BigFloat division by zero");
    if num.is_zero() {
        return BigFloat::zero_with_prec(prec);
    }
    let prec = if prec == 0 { DEFAULT_PRECISION } else { prec };
    let want = u64::from(prec) + 2 + den.bits();
    let shift = want.saturating_sub(num.bits());
    let (q, r) = (num << shift).div_rem(den);
    round_parts(
        neg,
        q,
        exp - BigInt::from(shift),
        !r.is_zero(),
        prec,
        mode,
    )
}

fn merge_prec(a: u32, b: u32) -> u32 {
    a.max(b)
}

impl BigFloat {
    fn zero_with_prec(prec: u32) -> Self {
        BigFloat {
            neg: false,
            mant: BigUint::zero(),
            exp: BigInt::zero(),
            prec,
        }
    }

    /// Exact `2^exp` tagged with `prec`.
    pub fn pow2(exp: BigInt, prec: u32) -> Self {
        BigFloat {
            neg: false,
            mant: BigUint::one(),
            exp,
            prec,
        }
    }

    pub fn from_integer(v: &BigInt, prec: u32) -> Self {
        let neg = v.sign() == Sign::Minus;
        round_parts(
            neg,
            v.magnitude().clone(),
            BigInt::zero(),
            false,
            prec,
            Rounding::Nearest,
        )
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::from_integer(&BigInt::from(v), prec)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        Self::from_rational_rounded(q, prec, Rounding::Nearest)
    }

    pub fn from_rational_rounded(q: &BigRational, prec: u32, mode: Rounding) -> Self {
        let neg = q.numer().sign() == Sign::Minus;
        round_ratio(
            neg,
            q.numer().magnitude(),
            q.denom().magnitude(),
            BigInt::zero(),
            prec,
            mode,
        )
    }

    /// Exact conversion of a finite `f64`, then rounded to `prec`.
    pub fn from_f64(v: f64, prec: u32) -> Self {
        assert!(v.is_finite(), "non-finite f64 has no BigFloat value");
        if v == 0.0 {
            return Self::zero_with_prec(prec);
        }
        let bits = v.to_bits();
        let neg = bits >> 63 == 1;
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if biased == 0 {
            (frac, -1074i64)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        round_parts(
            neg,
            BigUint::from(mant),
            BigInt::from(exp),
            false,
            prec,
            Rounding::Nearest,
        )
    }

    /// Exact rational value. Only sensible for moderate exponents.
    pub fn to_rational(&self) -> BigRational {
        let m = BigInt::from_biguint(
            if self.neg { Sign::Minus } else { Sign::Plus },
            self.mant.clone(),
        );
        let e = self.exp.to_i64().expect("exponent too large for an exact rational");
        if e >= 0 {
            BigRational::from_integer(m << e as u64)
        } else {
            BigRational::new(m, BigInt::one() << (-e) as u64)
        }
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    /// Re-round to `prec` bits (`0` keeps the value exact).
    pub fn with_precision(&self, prec: u32) -> Self {
        round_parts(
            self.neg,
            self.mant.clone(),
            self.exp.clone(),
            false,
            prec,
            Rounding::Nearest,
        )
    }

    pub fn is_negative(&self) -> bool {
        self.neg && !self.mant.is_zero()
    }

    pub fn mantissa(&self) -> &BigUint {
        &self.mant
    }

    pub fn exponent(&self) -> &BigInt {
        &self.exp
    }

    /// `exp + bitlen(mant)`: the value lies in `[2^(top-1), 2^top)`.
    fn top(&self) -> BigInt {
        &self.exp + BigInt::from(self.mant.bits())
    }

    pub fn abs(&self) -> Self {
        let mut r = self.clone();
        r.neg = false;
        r
    }

    /// Multiply by `2^k` exactly.
    pub fn mul_pow2(&self, k: &BigInt) -> Self {
        if self.mant.is_zero() {
            return self.clone();
        }
        let mut r = self.clone();
        r.exp += k;
        r
    }

    pub fn add_rounded(&self, other: &Self, prec: u32, mode: Rounding) -> Self {
        if self.mant.is_zero() {
            return round_parts(
                other.neg,
                other.mant.clone(),
                other.exp.clone(),
                false,
                prec,
                mode,
            );
        }
        if other.mant.is_zero() {
            return round_parts(
                self.neg,
                self.mant.clone(),
                self.exp.clone(),
                false,
                prec,
                mode,
            );
        }
        let (big, small) = if self.top() >= other.top() {
            (self, other)
        } else {
            (other, self)
        };
        // A summand far below the rounding position only matters through its sign, so it is
        // replaced by a one-bit stand-in strictly below every rounding boundary near `big`.
        let standin;
        let small = if prec > 0 {
            let boundary: BigInt = std::cmp::min(big.top() - BigInt::from(prec) - 4, &big.exp - BigInt::from(2));
            if small.top() < boundary {
                standin = BigFloat {
                    neg: small.neg,
                    mant: BigUint::one(),
                    exp: boundary - 1,
                    prec: 0,
                };
                &standin
            } else {
                small
            }
        } else {
            small
        };
        let e = (&big.exp).min(&small.exp).clone();
        let sb = (&big.exp - &e).to_u64().expect("alignment shift out of range");
        let ss = (&small.exp - &e).to_u64().expect("alignment shift out of range");
        let mb = &big.mant << sb;
        let ms = &small.mant << ss;
        let (neg, mant) = if big.neg == small.neg {
            (big.neg, mb + ms)
        } else {
            match mb.cmp(&ms) {
                Ordering::Greater => (big.neg, mb - ms),
                Ordering::Less => (small.neg, ms - mb),
                Ordering::Equal => return Self::zero_with_prec(prec),
            }
        };
        round_parts(neg, mant, e, false, prec, mode)
    }

    pub fn mul_rounded(&self, other: &Self, prec: u32, mode: Rounding) -> Self {
        if self.mant.is_zero() || other.mant.is_zero() {
            return Self::zero_with_prec(prec);
        }
        round_parts(
            self.neg != other.neg,
            &self.mant * &other.mant,
            &self.exp + &other.exp,
            false,
            prec,
            mode,
        )
    }

    pub fn div_rounded(&self, other: &Self, prec: u32, mode: Rounding) -> Self {
        round_ratio(
            self.neg != other.neg,
            &self.mant,
            &other.mant,
            &self.exp - &other.exp,
            prec,
            mode,
        )
    }

    /// Square root; panics on negative input.
    pub fn sqrt_rounded(&self, prec: u32, mode: Rounding) -> Self {
        assert!(!self.is_negative(), "square root of a negative BigFloat");
        if self.mant.is_zero() {
            return Self::zero_with_prec(prec);
        }
        let prec = if prec == 0 { DEFAULT_PRECISION } else { prec };
        let want = 2 * (u64::from(prec) + 2);
        let mut shift = want.saturating_sub(self.mant.bits());
        if (&self.exp - BigInt::from(shift)).is_odd() {
            shift += 1;
        }
        let m = &self.mant << shift;
        let root = m.sqrt();
        let sticky = &root * &root != m;
        let exp: BigInt = (&self.exp - BigInt::from(shift)) / 2;
        round_parts(false, root, exp, sticky, prec, mode)
    }

    pub fn sqrt(&self) -> Self {
        self.sqrt_rounded(self.prec, Rounding::Nearest)
    }

    /// Truncate toward zero to an integer value.
    pub fn trunc(&self) -> Self {
        if self.mant.is_zero() || !self.exp.is_negative() {
            return self.clone();
        }
        let shift = (-&self.exp).to_u64().unwrap_or(u64::MAX);
        if shift >= self.mant.bits() {
            return Self::zero_with_prec(self.prec);
        }
        round_parts(
            self.neg,
            &self.mant >> shift,
            BigInt::zero(),
            false,
            self.prec,
            Rounding::Nearest,
        )
    }

    /// Approximate `log2|x|`; `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.mant.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.mant.bits();
        let shift = bits.saturating_sub(60);
        let head = (&self.mant >> shift).to_f64().unwrap_or(1.0);
        head.log2() + shift as f64 + self.exp.to_f64().unwrap_or(f64::NAN)
    }

    pub fn to_f64(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let shift = bits.saturating_sub(64);
        let head = (&self.mant >> shift).to_f64().unwrap_or(0.0);
        let e = &self.exp + BigInt::from(shift);
        let v = match e.to_i64() {
            Some(e) if e < -1200 => 0.0,
            Some(e) if e > 1200 => f64::INFINITY,
            Some(e) => {
                let e = e as i32;
                let h = e / 2;
                head * 2f64.powi(h) * 2f64.powi(e - h)
            }
            None if e.is_negative() => 0.0,
            None => f64::INFINITY,
        };
        if self.neg {
            -v
        } else {
            v
        }
    }

    fn cmp_abs(&self, other: &Self) -> Ordering {
        match (self.mant.is_zero(), other.mant.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        match self.top().cmp(&other.top()) {
            Ordering::Equal => {}
            o => return o,
        }
        let e = (&self.exp).min(&other.exp).clone();
        let a = &self.mant << (&self.exp - &e).to_u64().unwrap();
        let b = &other.mant << (&other.exp - &e).to_u64().unwrap();
        a.cmp(&b)
    }

    /// Decimal rendering with `digits` significant digits, trailing zeros trimmed.
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.mant.is_zero() {
            return "0".to_string();
        }
        let digits = digits.max(1);
        let mut k = (self.log2_abs() * std::f64::consts::LOG10_2).floor() as i64;
        let lo = BigUint::from(10u32).pow(digits as u32 - 1);
        let hi = &lo * 10u32;
        let mut n = BigUint::zero();
        for _ in 0..4 {
            n = self.scaled_decimal_integer(digits as i64 - 1 - k, digits);
            if n >= hi {
                k += 1;
            } else if n < lo {
                k -= 1;
            } else {
                break;
            }
        }
        if n >= hi {
            // rounding carried into a new digit, e.g. 9.99.. -> 10.0
            n /= 10u32;
            k += 1;
        }
        let ds = n.to_str_radix(10);
        let sign = if self.neg { "-" } else { "" };
        let trim = |s: &str| -> String {
            if s.contains('.') {
                s.trim_end_matches('0').trim_end_matches('.').to_string()
            } else {
                s.to_string()
            }
        };
        if (-8..40).contains(&k) {
            let body = if k < 0 {
                format!("0.{}{}", "0".repeat((-k - 1) as usize), ds)
            } else if (k as usize) + 1 >= ds.len() {
                format!("{}{}", ds, "0".repeat(k as usize + 1 - ds.len()))
            } else {
                let (a, b) = ds.split_at(k as usize + 1);
                format!("{a}.{b}")
            };
            format!("{sign}{}", trim(&body))
        } else {
            let (a, b) = ds.split_at(1);
            let mantissa = trim(&format!("{a}.{b}"));
            format!("{sign}{mantissa}e{k}")
        }
    }

    /// `round(|self| * 10^s)` as an integer.
    fn scaled_decimal_integer(&self, s: i64, digits: usize) -> BigUint {
        let small_exp = self.exp.to_i64().filter(|e| e.abs() <= 200_000);
        if let (Some(e), true) = (small_exp, s.abs() <= 200_000) {
            let mut num = self.mant.clone();
            let mut den = BigUint::one();
            if e >= 0 {
                num <<= e as u64;
            } else {
                den <<= (-e) as u64;
            }
            let ten = BigUint::from(10u32);
            if s >= 0 {
                num *= ten.pow(s as u32);
            } else {
                den *= ten.pow((-s) as u32);
            }
            let (q, r) = num.div_rem(&den);
            let twice = r << 1u32;
            return if twice > den || (twice == den && q.bit(0)) {
                q + 1u32
            } else {
                q
            };
        }
        // Huge exponents: scale in floating point with generous guard bits.
        let work = (digits as f64 * 3.33) as u32 + 96;
        let ten = BigFloat::from_i64(10, work);
        let mut p = BigFloat::from_i64(1, work);
        let mut base = ten;
        let mut k = s.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                p = p.mul_rounded(&base, work, Rounding::Nearest);
            }
            base = base.mul_rounded(&base, work, Rounding::Nearest);
            k >>= 1;
        }
        let w = if s >= 0 {
            self.abs().mul_rounded(&p, work, Rounding::Nearest)
        } else {
            self.abs().div_rounded(&p, work, Rounding::Nearest)
        };
        let half = BigFloat::pow2(BigInt::from(-1), 0);
        let r = w.add_rounded(&half, work, Rounding::Nearest).trunc();
        match r.exp.to_u64() {
            Some(e) => &r.mant << e,
            None => BigUint::zero(),
        }
    }
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigFloat({} @{}b)", self.to_decimal(20), self.prec)
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = if self.prec == 0 {
            DEFAULT_PRECISION
        } else {
            self.prec
        };
        let digits = ((p.saturating_sub(8)) as f64 * std::f64::consts::LOG10_2).floor() as usize;
        f.write_str(&self.to_decimal(digits.max(1)))
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_total(other) == Ordering::Equal
    }
}

impl BigFloat {
    fn cmp_total(&self, other: &Self) -> Ordering {
        let sa = !self.mant.is_zero() && self.neg;
        let sb = !other.mant.is_zero() && other.neg;
        match (sa, sb) {
            (false, true) => Ordering::Greater,
            (true, false) => Ordering::Less,
            (false, false) => self.cmp_abs(other),
            (true, true) => other.cmp_abs(self),
        }
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_total(other))
    }
}

impl Zero for BigFloat {
    fn zero() -> Self {
        Self::zero_with_prec(0)
    }
    fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }
}

impl One for BigFloat {
    fn one() -> Self {
        Self::pow2(BigInt::zero(), 0)
    }
}

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(mut self) -> BigFloat {
        if !self.mant.is_zero() {
            self.neg = !self.neg;
        }
        self
    }
}

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        -self.clone()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&BigFloat> for &BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: &BigFloat) -> BigFloat {
                let f: fn(&BigFloat, &BigFloat) -> BigFloat = $body;
                f(self, rhs)
            }
        }
        impl $tr<BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: BigFloat) -> BigFloat {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: &BigFloat) -> BigFloat {
                (&self).$method(rhs)
            }
        }
        impl $tr<BigFloat> for &BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: BigFloat) -> BigFloat {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.add_rounded(
    b,
    merge_prec(a.prec, b.prec),
    Rounding::Nearest
));
forward_binop!(Sub, sub, |a, b| a.add_rounded(
    &-b,
    merge_prec(a.prec, b.prec),
    Rounding::Nearest
));
forward_binop!(Mul, mul, |a, b| a.mul_rounded(
    b,
    merge_prec(a.prec, b.prec),
    Rounding::Nearest
));
forward_binop!(Div, div, |a, b| a.div_rounded(
    b,
    merge_prec(a.prec, b.prec),
    Rounding::Nearest
));
forward_binop!(Rem, rem, |a, b| {
    let q = a.div_rounded(b, merge_prec(a.prec, b.prec), Rounding::Nearest).trunc();
    a - &(q * b)
});

impl Num for BigFloat {
    type FromStrRadixErr = crate::Error;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        if radix != 10 {
            return Err(crate::Error::Parse(format!("unsupported radix {radix}")));
        }
        let q = crate::scalar::parse_decimal(s)?;
        Ok(BigFloat::from_rational(&q, DEFAULT_PRECISION))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bf(v: f64) -> BigFloat {
        BigFloat::from_f64(v, 53)
    }

    #[test]
    fn basic_arithmetic_matches_f64() {
        assert_eq!((bf(1.5) + bf(2.25)).to_f64(), 3.75);
        assert_eq!((bf(1.5) - bf(2.25)).to_f64(), -0.75);
        assert_eq!((bf(1.5) * bf(-2.0)).to_f64(), -3.0);
        assert_eq!((bf(1.0) / bf(3.0)).to_f64(), 1.0 / 3.0);
        assert_eq!(bf(2.0).sqrt().to_f64(), 2f64.sqrt());
    }

    #[test]
    fn tiny_values_do_not_underflow() {
        let tiny = BigFloat::pow2(BigInt::from(-86_400_000i64), 256);
        assert!(!tiny.is_zero());
        assert_eq!(tiny.log2_abs(), -86_400_000.0);
        let one = BigFloat::from_i64(1, 256);
        let s = &one + &tiny;
        assert_eq!(s, one);
        // directed rounding still sees the tiny summand
        let up = one.add_rounded(&tiny, 256, Rounding::Up);
        assert!(up > one);
        let down = one.add_rounded(&-&tiny, 256, Rounding::Down);
        assert!(down < one);
        assert_eq!(one.add_rounded(&-&tiny, 256, Rounding::Up), one);
    }

    #[test]
    fn exact_constants_stay_exact() {
        let two = BigFloat::one() + BigFloat::one();
        assert_eq!(two.precision(), 0);
        assert_eq!(two.to_f64(), 2.0);
        let third = BigFloat::one() / (two + BigFloat::one());
        assert_eq!(third.precision(), DEFAULT_PRECISION);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(BigFloat::from_f64(1.0625, 256).to_string(), "1.0625");
        assert_eq!(BigFloat::from_f64(-0.5, 256).to_string(), "-0.5");
        assert_eq!(BigFloat::from_i64(3, 256).to_string(), "3");
        assert_eq!(BigFloat::from_f64(1e-3, 64).to_decimal(4), "0.001");
        let third = BigFloat::from_i64(1, 64) / BigFloat::from_i64(3, 64);
        assert_eq!(third.to_decimal(5), "0.33333");
        let tiny = BigFloat::pow2(BigInt::from(-108), 256);
        assert_eq!(tiny.to_decimal(6), "3.08149e-33");
        let huge_neg = BigFloat::pow2(BigInt::from(-27648), 256);
        assert!(huge_neg.to_decimal(10).ends_with("e-8323"));
        let nines = BigFloat::from_f64(9.9999999, 64);
        assert_eq!(nines.to_decimal(3), "10");
    }

    #[test]
    fn rem_and_trunc() {
        assert_eq!((bf(7.5) % bf(2.0)).to_f64(), 1.5);
        assert_eq!(bf(-7.5).trunc().to_f64(), -7.0);
        assert_eq!(bf(0.25).trunc().to_f64(), 0.0);
    }

    #[test]
    fn from_str_parses_decimal() {
        let v: BigFloat = Num::from_str_radix("0.0625", 10).unwrap();
        assert_eq!(v.to_f64(), 0.0625);
        let w: BigFloat = Num::from_str_radix("-1.5e-3", 10).unwrap();
        assert_eq!(w.to_f64(), -1.5e-3);
    }

    proptest! {
        #[test]
        fn ops_round_like_f64(a in -1e6f64..1e6, b in -1e6f64..1e6) {
            let (x, y) = (bf(a), bf(b));
            prop_assert_eq!((&x + &y).to_f64(), a + b);
            prop_assert_eq!((&x - &y).to_f64(), a - b);
            prop_assert_eq!((&x * &y).to_f64(), a * b);
            if b != 0.0 {
                prop_assert_eq!((&x / &y).to_f64(), a / b);
            }
            prop_assert_eq!(x.partial_cmp(&y), a.partial_cmp(&b));
        }

        #[test]
        fn directed_rounding_brackets_exact_sum(a in -1e6f64..1e6, b in -1e6f64..1e6, p in 8u32..40) {
            let (x, y) = (bf(a), bf(b));
            let exact = x.to_rational() + y.to_rational();
            let up = x.add_rounded(&y, p, Rounding::Up).to_rational();
            let down = x.add_rounded(&y, p, Rounding::Down).to_rational();
            prop_assert!(down <= exact && exact <= up);
            let prod = x.to_rational() * y.to_rational();
            prop_assert!(x.mul_rounded(&y, p, Rounding::Up).to_rational() >= prod);
            prop_assert!(x.mul_rounded(&y, p, Rounding::Down).to_rational() <= prod);
        }
    }
}
