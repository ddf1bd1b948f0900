//! Liouville coefficient sequences: generation, growth audit, partial sums and tail bounds.
//!
//! A sequence is a list of non-zero integer denominators `a_1, a_2, ...`. The series is
//! `H(x) = sum_{i>=1} x^i / a_i`. Denominators are stored through their base-2 logarithm,
//! which is exact for the built-in sequences (all powers of two), so entries such as
//! `a_6 = 2^86400000` never have to be materialized.

use num_bigint::{BigInt, BigUint, Sign};
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{FloatScalar, Scalar};

/// Number of entries generated for the built-in sequences.
pub const DEFAULT_LENGTH: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceKind {
    /// `a_1 = 2`, `a_{i+1} = a_i^(i^i)`.
    DefaultTower,
    /// `a_i = 2^(i!)`; fails the growth condition, kept as a negative control.
    FactorialPow2,
    #[serde(alias = "user")]
    UserSupplied,
}

/// One denominator `a_i`, known through bounds on `log2|a_i|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Denominator {
    negative: bool,
    /// `floor(log2|a_i|)`.
    log2_lo: BigUint,
    /// `ceil(log2|a_i|)`; equal to `log2_lo` exactly when `|a_i|` is a power of two.
    log2_hi: BigUint,
    /// The integer itself, kept for user-supplied entries.
    value: Option<BigInt>,
}

impl Denominator {
    fn pow2(log2: BigUint) -> Self {
        Denominator {
            negative: false,
            log2_lo: log2.clone(),
            log2_hi: log2,
            value: None,
        }
    }

    fn from_integer(v: &BigInt) -> Result<Self> {
        if v.is_zero() {
            return Err(Error::InvalidSequence("zero denominator".into()));
        }
        let mag = v.magnitude();
        let lo = BigUint::from(mag.bits() - 1);
        let pow2 = mag.count_ones() == 1;
        let hi = if pow2 { lo.clone() } else { &lo + 1u32 };
        Ok(Denominator {
            negative: v.sign() == Sign::Minus,
            log2_lo: lo,
            log2_hi: hi,
            value: Some(v.clone()),
        })
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn is_power_of_two(&self) -> bool {
        self.log2_lo == self.log2_hi
    }

    /// Exact `log2|a_i|` when `|a_i|` is a power of two.
    pub fn log2_exact(&self) -> Option<&BigUint> {
        self.is_power_of_two().then_some(&self.log2_lo)
    }

    pub fn log2_floor(&self) -> &BigUint {
        &self.log2_lo
    }

    pub fn log2_ceil(&self) -> &BigUint {
        &self.log2_hi
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiouvilleSequence {
    kind: SequenceKind,
    entries: Vec<Denominator>,
}

/// Outcome of checking `|a_{i+1}| > |a_i|^(i^l)` for `i = 1..=i_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthAudit {
    pub l: u32,
    /// `checks[i-1]` is the result at index `i`.
    pub checks: Vec<bool>,
    /// Least index from which every check through `i_max` passes.
    pub least_all_true_index: Option<usize>,
    pub first_failing_index: Option<usize>,
    pub audited_through: usize,
}

impl GrowthAudit {
    pub fn admissible(&self) -> bool {
        self.least_all_true_index.is_some()
    }
}

pub fn make_sequence(kind: SequenceKind, params: Option<&[BigInt]>) -> Result<LiouvilleSequence> {
    match kind {
        SequenceKind::DefaultTower => Ok(LiouvilleSequence::default_tower(DEFAULT_LENGTH)),
        SequenceKind::FactorialPow2 => Ok(LiouvilleSequence::factorial_pow2(DEFAULT_LENGTH)),
        SequenceKind::UserSupplied => {
            let values = params.ok_or_else(|| {
                Error::InvalidSequence("user sequence needs explicit values".into())
            })?;
            LiouvilleSequence::user(values)
        }
    }
}

impl LiouvilleSequence {
    pub fn default_tower(len: usize) -> Self {
        let mut entries = Vec::with_capacity(len);
        let mut log2 = BigUint::one();
        for i in 1..=len {
            entries.push(Denominator::pow2(log2.clone()));
            let ii = BigUint::from(i).pow(i as u32);
            log2 *= ii;
        }
        LiouvilleSequence {
            kind: SequenceKind::DefaultTower,
            entries,
        }
    }

    pub fn factorial_pow2(len: usize) -> Self {
        let mut entries = Vec::with_capacity(len);
        let mut fact = BigUint::one();
        for i in 1..=len {
            fact *= i;
            entries.push(Denominator::pow2(fact.clone()));
        }
        LiouvilleSequence {
            kind: SequenceKind::FactorialPow2,
            entries,
        }
    }

    pub fn user(values: &[BigInt]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSequence("empty sequence".into()));
        }
        let entries = values
            .iter()
            .enumerate()
            .map(|(k, v)| {
                Denominator::from_integer(v).map_err(|_| {
                    Error::InvalidSequence(format!("entry a_{} is zero", k + 1))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LiouvilleSequence {
            kind: SequenceKind::UserSupplied,
            entries,
        })
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Denominator `a_i` (1-based).
    pub fn entry(&self, i: usize) -> Result<&Denominator> {
        if i == 0 {
            return Err(Error::InvalidIndex(0));
        }
        self.entries.get(i - 1).ok_or(Error::SequenceExhausted {
            index: i,
            len: self.entries.len(),
        })
    }

    /// Exact `log2|a_i|` for every entry, or `None` if some entry is not a power of two.
    pub fn log2_magnitudes(&self) -> Option<Vec<BigUint>> {
        self.entries
            .iter()
            .map(|e| e.log2_exact().cloned())
            .collect()
    }

    /// Check `|a_{i+1}| > |a_i|^(i^l)` for every `i` in `1..=i_max`, exactly.
    pub fn audit_growth(&self, l: u32, i_max: usize) -> Result<GrowthAudit> {
        if l == 0 {
            return Err(Error::InvalidArgument("growth exponent l must be >= 1".into()));
        }
        if i_max == 0 {
            return Err(Error::InvalidArgument("i_max must be >= 1".into()));
        }
        if i_max + 1 > self.len() {
            return Err(Error::SequenceExhausted {
                index: i_max + 1,
                len: self.len(),
            });
        }
        let checks: Vec<bool> = (1..=i_max).map(|i| self.growth_check(i, l)).collect();
        let mut least = None;
        for i in (1..=i_max).rev() {
            if checks[i - 1] {
                least = Some(i);
            } else {
                break;
            }
        }
        let first_failing = checks.iter().position(|c| !c).map(|p| p + 1);
        Ok(GrowthAudit {
            l,
            checks,
            least_all_true_index: least,
            first_failing_index: first_failing,
            audited_through: i_max,
        })
    }

    fn growth_check(&self, i: usize, l: u32) -> bool {
        let cur = &self.entries[i - 1];
        let next = &self.entries[i];
        let power = BigUint::from(i).pow(l);
        if cur.is_power_of_two() && next.is_power_of_two() {
            return next.log2_lo > &power * &cur.log2_lo;
        }
        if next.log2_lo > &power * &cur.log2_hi {
            return true;
        }
        if next.log2_hi < &power * &cur.log2_lo {
            return false;
        }
        // Undecided by the log bounds; both entries are user integers here.
        let (Some(a), Some(b)) = (&cur.value, &next.value) else {
            return false;
        };
        let e = power.to_u32().expect("growth exponent too large to compare exactly");
        b.magnitude() > &num_traits::pow(a.magnitude().clone(), e as usize)
    }

    /// `1 / a_i` as a real scalar at precision `prec`.
    pub fn coefficient<T: Scalar>(&self, i: usize, prec: u32) -> Result<T> {
        let e = self.entry(i)?;
        let v = match e.log2_exact() {
            Some(log2) => T::pow2(&-BigInt::from(log2.clone()), prec)?,
            None => {
                let a = e.value.clone().expect("non power-of-two entries are user integers");
                return T::from_rational(&BigRational::new(BigInt::one(), a), prec);
            }
        };
        Ok(if e.negative { -v } else { v })
    }

    pub fn coefficient_complex<T: Scalar>(&self, i: usize, prec: u32) -> Result<Complex<T>> {
        Ok(Complex::new(self.coefficient(i, prec)?, T::zero()))
    }

    /// Whether `log2|a_{i+1}| - log2|a_i|` is non-decreasing for all `i` beyond the stored
    /// entries. True by construction for the built-in sequences.
    fn gaps_increase_forever(&self) -> bool {
        !matches!(self.kind, SequenceKind::UserSupplied)
    }
}

/// Truncated series `H_{d,eps}(x) = sum_{i<=d} x^i/a_i + eps x^(d+1)` with cached coefficients.
#[derive(Clone, Debug)]
pub struct PartialSum<T> {
    coeffs: Vec<Complex<T>>,
    /// `i * c_i`.
    deriv_coeffs: Vec<Complex<T>>,
    eps: Complex<T>,
    /// `(d+1) * eps`.
    deriv_eps: Complex<T>,
}

impl<T: Scalar> PartialSum<T> {
    pub fn new(seq: &LiouvilleSequence, d: usize, eps: Complex<T>, prec: u32) -> Result<Self> {
        let coeffs = (1..=d)
            .map(|i| seq.coefficient_complex::<T>(i, prec))
            .collect::<Result<Vec<_>>>()?;
        Self::from_coefficients(coeffs, eps, prec)
    }

    pub fn from_coefficients(coeffs: Vec<Complex<T>>, eps: Complex<T>, prec: u32) -> Result<Self> {
        let deriv_coeffs = coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| Ok(c.clone() * T::from_integer(k as i64 + 1, prec)?))
            .collect::<Result<Vec<_>>>()?;
        let deriv_eps = eps.clone() * T::from_integer(coeffs.len() as i64 + 1, prec)?;
        Ok(PartialSum {
            coeffs,
            deriv_coeffs,
            eps,
            deriv_eps,
        })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eps(&self) -> &Complex<T> {
        &self.eps
    }

    pub fn coefficients(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// Same coefficients, different perturbation.
    pub fn with_eps(&self, eps: Complex<T>, prec: u32) -> Result<Self> {
        let deriv_eps = eps.clone() * T::from_integer(self.coeffs.len() as i64 + 1, prec)?;
        Ok(PartialSum {
            coeffs: self.coeffs.clone(),
            deriv_coeffs: self.deriv_coeffs.clone(),
            eps,
            deriv_eps,
        })
    }

    fn powers(x: &Complex<T>, upto: usize) -> Vec<Complex<T>> {
        let mut p = Vec::with_capacity(upto + 1);
        p.push(Complex::new(T::one(), T::zero()));
        for k in 1..=upto {
            let next = p[k - 1].clone() * x.clone();
            p.push(next);
        }
        p
    }

    /// Terms are added from the highest index down, so the smallest ones go first.
    pub fn eval(&self, x: &Complex<T>) -> Complex<T> {
        let d = self.coeffs.len();
        let p = Self::powers(x, d + 1);
        let mut acc = self.eps.clone() * p[d + 1].clone();
        for i in (1..=d).rev() {
            acc = acc + self.coeffs[i - 1].clone() * p[i].clone();
        }
        acc
    }

    pub fn derivative(&self, x: &Complex<T>) -> Complex<T> {
        let d = self.coeffs.len();
        let p = Self::powers(x, d);
        let mut acc = self.deriv_eps.clone() * p[d].clone();
        for i in (1..=d).rev() {
            acc = acc + self.deriv_coeffs[i - 1].clone() * p[i - 1].clone();
        }
        acc
    }

    /// `dH_{d,eps}/d eps = x^(d+1)`.
    pub fn eps_derivative(&self, x: &Complex<T>) -> Complex<T> {
        let mut p = Complex::new(T::one(), T::zero());
        for _ in 0..=self.coeffs.len() {
            p = p * x.clone();
        }
        p
    }
}

pub fn eval_partial_sum<T: Scalar>(
    seq: &LiouvilleSequence,
    d: usize,
    eps: &Complex<T>,
    x: &Complex<T>,
    prec: u32,
) -> Result<Complex<T>> {
    Ok(PartialSum::new(seq, d, eps.clone(), prec)?.eval(x))
}

pub fn eval_partial_sum_derivative<T: Scalar>(
    seq: &LiouvilleSequence,
    d: usize,
    eps: &Complex<T>,
    x: &Complex<T>,
    prec: u32,
) -> Result<Complex<T>> {
    Ok(PartialSum::new(seq, d, eps.clone(), prec)?.derivative(x))
}

/// `H_k(x) + x^k g(x)` with `g` given by its coefficients, lowest degree first.
pub fn eval_modified_partial_sum<T: Scalar>(
    seq: &LiouvilleSequence,
    k: usize,
    g: &[Complex<T>],
    x: &Complex<T>,
    prec: u32,
) -> Result<Complex<T>> {
    let zero = Complex::new(T::zero(), T::zero());
    let h = eval_partial_sum(seq, k, &zero, x, prec)?;
    let gx = g
        .iter()
        .rev()
        .fold(zero.clone(), |acc, c| acc * x.clone() + c.clone());
    let mut xk = Complex::new(T::one(), T::zero());
    for _ in 0..k {
        xk = xk * x.clone();
    }
    Ok(h + xk * gx)
}

/// Certified upper bound on `sup_{|x|<=r} |H(x) - H_d(x)|`.
///
/// With `t_i = r^i/|a_i|`, every ratio `t_{i+1}/t_i` for `i = max(d,1) .. d+m-1` must be at
/// most `1/2`; the tail is then majorized by `t_{d+1} + ... + t_{d+m-1} + 2 t_{d+m}`.
/// For the built-in sequences the log-gap `log2|a_{i+1}| - log2|a_i|` only grows, so the
/// halving persists past the probed window. User sequences are taken on trust past their
/// last stored entry. All arithmetic rounds upward.
pub fn tail_bound<T: FloatScalar>(
    seq: &LiouvilleSequence,
    d: usize,
    r: &T,
    m: usize,
    prec: u32,
) -> Result<T> {
    if *r < T::zero() {
        return Err(Error::InvalidArgument("radius must be non-negative".into()));
    }
    if m < 2 {
        return Err(Error::InvalidArgument("probe count m must be >= 2".into()));
    }
    if r.is_zero() {
        return Ok(T::zero());
    }
    if d + m > seq.len() {
        return Err(Error::SequenceExhausted {
            index: d + m,
            len: seq.len(),
        });
    }
    let last_checked = if seq.gaps_increase_forever() {
        d + m - 1
    } else {
        seq.len() - 1
    };
    for i in d.max(1)..=last_checked {
        let cur = seq.entry(i)?;
        let next = seq.entry(i + 1)?;
        // t_{i+1}/t_i <= r * 2^(hi_i - lo_{i+1}) <= 1/2  <=>  r <= 2^(lo_{i+1} - hi_i - 1)
        let k = BigInt::from(next.log2_floor().clone()) - BigInt::from(cur.log2_ceil().clone()) - 1;
        if !le_pow2(r, &k, prec)? {
            return Err(Error::RatioTestFailed { index: i + 1 });
        }
    }
    let mut powers = Vec::with_capacity(d + m);
    let mut p = T::from_f64(1.0, prec);
    for _ in 0..d + m {
        p = p.mul_up(r, prec);
        powers.push(p.clone());
    }
    let term = |i: usize| -> Result<T> {
        let lo = BigInt::from(seq.entry(i)?.log2_floor().clone());
        powers[i - 1].mul_pow2(&-lo)
    };
    let mut acc = term(d + m)?.mul_up(&T::from_f64(2.0, prec), prec);
    for i in (d + 1..d + m).rev() {
        acc = acc.add_up(&term(i)?, prec);
    }
    Ok(acc)
}

/// `r <= 2^k`, decided exactly.
fn le_pow2<T: FloatScalar>(r: &T, k: &BigInt, prec: u32) -> Result<bool> {
    let lr = r.log2_abs();
    if let Some(kf) = k.to_f64() {
        if lr < kf - 1.0 {
            return Ok(true);
        }
        if lr > kf + 1.0 {
            return Ok(false);
        }
    } else {
        return Ok(k.is_positive());
    }
    Ok(*r <= T::pow2(k, prec)?)
}
