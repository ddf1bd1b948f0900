//! JSON schemas for systems, parameters, points and sequences, plus output records that
//! carry every number as a decimal string.
//!
//! A system file looks like
//!
//! ```json
//! { "n": 1, "r": 0,
//!   "components": [[ {"coeff": "1", "x": [0], "y": [1]},
//!                    {"coeff": "-1", "x": [2], "y": [0]} ]] }
//! ```
//!
//! Coefficients and complex values are either a string (`"3"`, `"-0.25"`, `"1/3"`, `"2e-5"`)
//! or an object `{"re": "...", "im": "..."}`. Plain JSON numbers are accepted and read from
//! their decimal text.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::certify::{Tolerances, Witness, ZeroCertificate};
use crate::error::{Error, Result};
use crate::poly::{PolynomialMap, Term};
use crate::scalar::{parse_decimal, FloatScalar};
use crate::series::{LiouvilleSequence, SequenceKind, DEFAULT_LENGTH};
use crate::tracker::{LimitRoot, PathState};
use crate::GaussianRational;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Text(String),
    Number(serde_json::Number),
    Complex {
        re: Box<Value>,
        #[serde(default)]
        im: Option<Box<Value>>,
    },
}

/// `p/q` or a decimal literal.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    match s.split_once('/') {
        Some((p, q)) => {
            let (p, q) = (parse_decimal(p)?, parse_decimal(q)?);
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(p / q)
        }
        None => parse_decimal(s),
    }
}

impl Value {
    fn real(&self) -> Result<BigRational> {
        match self {
            Value::Text(s) => parse_rational(s),
            Value::Number(n) => parse_decimal(&n.to_string()),
            Value::Complex { .. } => Err(Error::Parse("nested complex value".into())),
        }
    }

    pub fn to_gaussian(&self) -> Result<GaussianRational> {
        match self {
            Value::Complex { re, im } => Ok(Complex::new(
                re.real()?,
                match im {
                    Some(v) => v.real()?,
                    None => BigRational::zero(),
                },
            )),
            v => Ok(Complex::new(v.real()?, BigRational::zero())),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub coeff: Value,
    #[serde(default)]
    pub x: Vec<u32>,
    #[serde(default)]
    pub y: Vec<u32>,
    #[serde(default)]
    pub z: Vec<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub n: usize,
    #[serde(default)]
    pub r: usize,
    pub components: Vec<Vec<TermSpec>>,
}

fn pad(mut v: Vec<u32>, len: usize, what: &'static str) -> Result<Vec<u32>> {
    if v.len() > len {
        return Err(Error::DimensionMismatch {
            what,
            expected: len,
            got: v.len(),
        });
    }
    v.resize(len, 0);
    Ok(v)
}

impl SystemSpec {
    /// Exponent lists may be shorter than `n` (or `r`); missing entries are zero.
    pub fn build(self) -> Result<PolynomialMap> {
        let (n, r) = (self.n, self.r);
        let comps = self
            .components
            .into_iter()
            .map(|terms| {
                terms
                    .into_iter()
                    .map(|t| {
                        Ok(Term::new(
                            t.coeff.to_gaussian()?,
                            pad(t.x, n, "x exponents")?,
                            pad(t.y, n, "y exponents")?,
                            pad(t.z, r, "z exponents")?,
                        ))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        PolynomialMap::new(n, r, comps)
    }
}

fn from_json<'a, D: Deserialize<'a>>(text: &'a str) -> Result<D> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn parse_system(text: &str) -> Result<PolynomialMap> {
    from_json::<SystemSpec>(text)?.build()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    #[serde(default)]
    pub z: Vec<Value>,
}

pub fn parse_params(text: &str) -> Result<Vec<GaussianRational>> {
    from_json::<ParamsSpec>(text)?.z.iter().map(Value::to_gaussian).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub x: Vec<Value>,
    #[serde(default)]
    pub y: Option<Vec<Value>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    pub x: Vec<GaussianRational>,
    pub y: Option<Vec<GaussianRational>>,
}

pub fn parse_point(text: &str) -> Result<Point> {
    let spec: PointSpec = from_json(text)?;
    Ok(Point {
        x: spec.x.iter().map(Value::to_gaussian).collect::<Result<_>>()?,
        y: spec
            .y
            .map(|y| y.iter().map(Value::to_gaussian).collect::<Result<_>>())
            .transpose()?,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceSpec {
    pub kind: SequenceKind,
    /// Integer denominators for user sequences.
    #[serde(default)]
    pub values: Option<Vec<Value>>,
    #[serde(default)]
    pub length: Option<usize>,
}

impl SequenceSpec {
    pub fn build(&self) -> Result<LiouvilleSequence> {
        match self.kind {
            SequenceKind::UserSupplied => {
                let vals = self
                    .values
                    .as_ref()
                    .ok_or_else(|| Error::InvalidSequence("user sequence needs values".into()))?;
                let ints = vals
                    .iter()
                    .map(|v| {
                        let q = v.to_gaussian()?;
                        if !q.im.is_zero() || !q.re.is_integer() {
                            return Err(Error::InvalidSequence("denominators must be integers".into()));
                        }
                        Ok(q.re.to_integer())
                    })
                    .collect::<Result<Vec<BigInt>>>()?;
                LiouvilleSequence::user(&ints)
            }
            SequenceKind::DefaultTower => Ok(LiouvilleSequence::default_tower(self.length.unwrap_or(DEFAULT_LENGTH))),
            SequenceKind::FactorialPow2 => Ok(LiouvilleSequence::factorial_pow2(self.length.unwrap_or(DEFAULT_LENGTH))),
        }
    }
}

pub fn parse_sequence(text: &str) -> Result<LiouvilleSequence> {
    from_json::<SequenceSpec>(text)?.build()
}

/// Significant decimal digits reported at a given precision: `(prec - 8) log10 2`, so that
/// eight guard bits separate the printed digits from the rounding position.
pub fn decimal_digits(prec: u32) -> usize {
    ((f64::from(prec.saturating_sub(8))) * std::f64::consts::LOG10_2).floor().max(1.0) as usize
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexOut {
    pub re: String,
    pub im: String,
}

pub fn complex_out<T: FloatScalar>(v: &Complex<T>, digits: usize) -> ComplexOut {
    ComplexOut {
        re: v.re.to_decimal(digits),
        im: v.im.to_decimal(digits),
    }
}

pub fn vec_out<T: FloatScalar>(v: &[Complex<T>], digits: usize) -> Vec<ComplexOut> {
    v.iter().map(|c| complex_out(c, digits)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TolerancesOut {
    pub residual_tol: String,
    pub rank_rel_tol: String,
    pub distinctness_tol: String,
    pub tangent_tol: String,
    pub det_tol: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagsOut {
    pub regular: bool,
    pub balanced: bool,
    pub well_balanced: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessOut {
    #[serde(rename = "I")]
    pub i: Vec<usize>,
    #[serde(rename = "J")]
    pub j: Vec<usize>,
    pub abs_det: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateOut {
    pub flags: FlagsOut,
    pub witness: Option<WitnessOut>,
    pub residual: String,
    pub jacobian_rank: usize,
    pub singular_values: Vec<String>,
    pub tangent_norms: Option<Vec<String>>,
    pub tolerances: TolerancesOut,
    pub x: Vec<ComplexOut>,
    pub y: Vec<ComplexOut>,
}

pub fn tolerances_out<T: FloatScalar>(t: &Tolerances<T>, digits: usize) -> TolerancesOut {
    TolerancesOut {
        residual_tol: t.residual_tol.to_decimal(digits),
        rank_rel_tol: t.rank_rel_tol.to_decimal(digits),
        distinctness_tol: t.distinctness_tol.to_decimal(digits),
        tangent_tol: t.tangent_tol.to_decimal(digits),
        det_tol: t.det_tol.to_decimal(digits),
    }
}

pub fn certificate_out<T: FloatScalar>(c: &ZeroCertificate<T>, digits: usize) -> CertificateOut {
    CertificateOut {
        flags: FlagsOut {
            regular: c.regular,
            balanced: c.balanced,
            well_balanced: c.well_balanced,
        },
        witness: c.witness.as_ref().map(|Witness { i, j }| WitnessOut {
            i: i.clone(),
            j: j.clone(),
            abs_det: c
                .witness_det
                .as_ref()
                .map(|d| d.to_decimal(digits))
                .unwrap_or_default(),
        }),
        residual: c.residual_norm.to_decimal(digits),
        jacobian_rank: c.jacobian_rank,
        singular_values: c.singular_values.iter().map(|s| s.to_decimal(digits)).collect(),
        tangent_norms: c
            .tangent_norms
            .as_ref()
            .map(|v| v.iter().map(|s| s.to_decimal(digits)).collect()),
        tolerances: tolerances_out(&c.tolerances, digits),
        x: vec_out(&c.x, digits),
        y: vec_out(&c.y, digits),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitRootOut {
    pub a: Vec<ComplexOut>,
    pub start_d: usize,
    pub final_d: usize,
    pub certified: bool,
    pub residual_truncated: String,
    pub tail_term: Option<String>,
    pub lipschitz_y: Option<String>,
    pub total_residual_bound: Option<String>,
    /// `log2` of the total bound, rounded up to an integer.
    pub total_residual_bound_log2: Option<i64>,
    pub cauchy_history: Vec<String>,
    pub accepted_states: usize,
}

pub fn limit_root_out<T: FloatScalar>(l: &LimitRoot<T>, digits: usize) -> LimitRootOut {
    LimitRootOut {
        a: vec_out(&l.a, digits),
        start_d: l.start_d,
        final_d: l.final_d,
        certified: l.certified,
        residual_truncated: l.residual_truncated.to_decimal(digits),
        tail_term: l.tail_term.as_ref().map(|t| t.to_decimal(digits)),
        lipschitz_y: l.lipschitz_y.as_ref().map(|t| t.to_decimal(digits)),
        total_residual_bound: l.total_residual_bound.as_ref().map(|t| t.to_decimal(digits)),
        total_residual_bound_log2: l
            .total_residual_bound
            .as_ref()
            .map(|t| t.log2_abs().ceil() as i64),
        cauchy_history: l.cauchy_history.iter().map(|t| t.to_decimal(digits)).collect(),
        accepted_states: l.path.len(),
    }
}

/// CSV header for a trace of `n` coordinates.
pub fn trace_header(n: usize) -> String {
    let mut cols = vec!["d".to_string(), "eps_log2".to_string()];
    for k in 1..=n {
        cols.push(format!("x{k}_re"));
        cols.push(format!("x{k}_im"));
    }
    cols.push("residual_log2".into());
    cols.push("newton_iters".into());
    cols.join(",")
}

fn log2_field(v: f64) -> String {
    if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v:.3}")
    }
}

pub fn trace_row<T: FloatScalar>(s: &PathState<T>, digits: usize) -> String {
    let eps_log2 = {
        let m = s.eps.re.abs().log2_abs().max(s.eps.im.abs().log2_abs());
        log2_field(m)
    };
    let mut cols = vec![s.d.to_string(), eps_log2];
    for c in &s.x {
        cols.push(c.re.to_decimal(digits));
        cols.push(c.im.to_decimal(digits));
    }
    cols.push(log2_field(s.residual.log2_abs()));
    cols.push(s.newton_iters_last.to_string());
    cols.join(",")
}
