//! Regular, balanced and well-balanced zero certification for `F_z: C^n x C^n -> C^n`,
//! plus the augmentation `G = F ^ (P(x_I, y_J) y_{n+1} - 1)`.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex;
use rayon::prelude::*;

use crate::complex::{abs, norm2};
use crate::error::{Error, Result};
use crate::linalg::{determinant, svd, Matrix};
use crate::poly::{Polynomial, PolynomialMap, Term};
use crate::scalar::{FloatScalar, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Tolerances<T> {
    pub residual_tol: T,
    pub rank_rel_tol: T,
    pub distinctness_tol: T,
    pub tangent_tol: T,
    /// Absolute threshold a witness determinant must exceed.
    pub det_tol: T,
}

impl<T: FloatScalar> Tolerances<T> {
    /// Residual and distinctness at `2^(-prec/2)`; rank, tangent and determinant at `2^(-prec/4)`.
    pub fn defaults(prec: u32) -> Self {
        let p = |e: u32| T::pow2(&BigInt::from(-i64::from(e)), prec).unwrap_or_else(|_| T::epsilon(prec));
        Tolerances {
            residual_tol: p(prec / 2),
            rank_rel_tol: p(prec / 4),
            distinctness_tol: p(prec / 2),
            tangent_tol: p(prec / 4),
            det_tol: p(prec / 4),
        }
    }
}

/// Complementary index sets `I` (x-columns) and `J` (y-columns), 1-based and sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub i: Vec<usize>,
    pub j: Vec<usize>,
}

impl Witness {
    fn from_mask(mask: usize, n: usize) -> Self {
        let (i, j): (Vec<usize>, Vec<usize>) = (1..=n).partition(|k| mask >> (k - 1) & 1 == 1);
        Witness { i, j }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroCertificate<T> {
    pub x: Vec<Complex<T>>,
    pub y: Vec<Complex<T>>,
    pub z: Vec<Complex<T>>,
    pub residual_norm: T,
    pub jacobian_rank: usize,
    /// All `2n` singular values of the `n x 2n` Jacobian, descending.
    pub singular_values: Vec<T>,
    pub witness: Option<Witness>,
    pub witness_det: Option<T>,
    pub regular: bool,
    pub balanced: bool,
    pub well_balanced: bool,
    /// Per-coordinate norm of the projection of `e_{x_i}` onto the tangent space.
    pub tangent_norms: Option<Vec<T>>,
    pub tolerances: Tolerances<T>,
}

fn check_point<T>(f: &PolynomialMap, x: &[Complex<T>], y: &[Complex<T>], z: &[Complex<T>]) -> Result<()> {
    for (what, got, expected) in [("x", x.len(), f.n()), ("y", y.len(), f.n()), ("z", z.len(), f.r())] {
        if got != expected {
            return Err(Error::DimensionMismatch { what, expected, got });
        }
    }
    Ok(())
}

/// Residual and numerical-rank test.
pub fn certify_regular<T: FloatScalar>(
    f: &PolynomialMap,
    z: &[Complex<T>],
    x: &[Complex<T>],
    y: &[Complex<T>],
    tol: &Tolerances<T>,
    prec: u32,
) -> Result<ZeroCertificate<T>> {
    check_point(f, x, y, z)?;
    let num = f.numeric::<T>(prec)?;
    let residual_norm = norm2(&num.evaluate(x, y, z)?);
    if residual_norm > tol.residual_tol {
        return Err(Error::NotAZero {
            residual: residual_norm.to_decimal(6),
        });
    }
    let jac = num.jacobian(x, y, z)?;
    let sv = svd(&jac).singular_values;
    let n = f.n();
    let ratio = if sv[0].is_zero() {
        T::zero()
    } else {
        sv[n - 1].clone() / sv[0].clone()
    };
    let ten = T::from_f64(10.0, prec);
    let lower = tol.rank_rel_tol.clone() / ten.clone();
    let upper = tol.rank_rel_tol.clone() * ten;
    if ratio >= lower && ratio <= upper {
        return Err(Error::PrecisionExhausted {
            ratio: ratio.to_decimal(6),
        });
    }
    let jacobian_rank = if sv[0].is_zero() {
        0
    } else {
        sv.iter()
            .take(n)
            .filter(|s| (*s).clone() / sv[0].clone() > tol.rank_rel_tol)
            .count()
    };
    Ok(ZeroCertificate {
        x: x.to_vec(),
        y: y.to_vec(),
        z: z.to_vec(),
        residual_norm,
        jacobian_rank,
        singular_values: sv,
        witness: None,
        witness_det: None,
        regular: ratio > upper,
        balanced: false,
        well_balanced: false,
        tangent_norms: None,
        tolerances: tol.clone(),
    })
}

/// `|x_i| > tol` and `|x_i - x_j| > tol` for all `i != j`.
pub fn check_distinctness<T: FloatScalar>(x: &[Complex<T>], tol: &T) -> Result<()> {
    for (i, xi) in x.iter().enumerate() {
        if abs(xi) <= *tol {
            return Err(Error::DistinctnessViolated(format!("x{} is zero", i + 1)));
        }
        for (j, xj) in x.iter().enumerate().skip(i + 1) {
            if abs(&(xi.clone() - xj.clone())) <= *tol {
                return Err(Error::DistinctnessViolated(format!("x{} and x{} coincide", i + 1, j + 1)));
            }
        }
    }
    Ok(())
}

/// The `n x n` minor of an `n x 2n` Jacobian with x-columns from `I` and y-columns from `J`.
pub fn partition_minor<T: Scalar>(jac: &Matrix<T>, w: &Witness) -> Matrix<T> {
    let n = jac.len();
    let mut cols: Vec<usize> = w.i.iter().map(|k| k - 1).chain(w.j.iter().map(|k| n + k - 1)).collect();
    cols.sort_unstable();
    jac.iter().map(|row| cols.iter().map(|&c| row[c].clone()).collect()).collect()
}

/// Argmax of `|det|` over all `2^n` partitions. Candidates within a relative `2^(-prec/2)` of
/// the maximum count as tied and the lexicographically smallest `I` wins.
pub fn select_witness<T: FloatScalar>(jac: &Matrix<T>, det_tol: &T, prec: u32) -> Option<(Witness, T)> {
    let n = jac.len();
    let dets: Vec<(Witness, T)> = (0..1usize << n)
        .into_par_iter()
        .map(|mask| {
            let w = Witness::from_mask(mask, n);
            let d = abs(&determinant(&partition_minor(jac, &w)));
            (w, d)
        })
        .collect();
    let max = dets.iter().map(|(_, d)| d.clone()).fold(T::zero(), |m, d| if d > m { d } else { m });
    if max <= *det_tol {
        return None;
    }
    let rel = T::pow2(&BigInt::from(-i64::from(prec / 2)), prec).unwrap_or_else(|_| T::epsilon(prec));
    let floor = max.clone() - max * rel;
    dets.into_iter()
        .filter(|(_, d)| *d >= floor)
        .min_by(|a, b| a.0.i.cmp(&b.0.i))
}

pub fn find_balanced_witness<T: FloatScalar>(
    f: &PolynomialMap,
    z: &[Complex<T>],
    x: &[Complex<T>],
    y: &[Complex<T>],
    tol: &Tolerances<T>,
    prec: u32,
) -> Result<Option<(Witness, T)>> {
    check_point(f, x, y, z)?;
    check_distinctness(x, &tol.distinctness_tol)?;
    let jac = f.numeric::<T>(prec)?.jacobian(x, y, z)?;
    Ok(select_witness(&jac, &tol.det_tol, prec))
}

/// Full chain: regular, then balanced witness, then the tangent-space condition.
pub fn certify_well_balanced<T: FloatScalar>(
    f: &PolynomialMap,
    z: &[Complex<T>],
    x: &[Complex<T>],
    y: &[Complex<T>],
    tol: &Tolerances<T>,
    prec: u32,
) -> Result<ZeroCertificate<T>> {
    let mut cert = certify_regular(f, z, x, y, tol, prec)?;
    if !cert.regular {
        return Ok(cert);
    }
    let Some((w, det)) = find_balanced_witness(f, z, x, y, tol, prec)? else {
        return Ok(cert);
    };
    cert.witness = Some(w);
    cert.witness_det = Some(det);
    cert.balanced = true;
    let n = f.n();
    let jac = f.numeric::<T>(prec)?.jacobian(x, y, z)?;
    let kernel = &svd(&jac).v[n..];
    let norms: Vec<T> = (0..n)
        .map(|i| {
            kernel
                .iter()
                .fold(T::zero(), |s, v| s + crate::complex::norm_sqr(&v[i]))
                .sqrt()
        })
        .collect();
    cert.well_balanced = norms.iter().all(|v| *v > tol.tangent_tol);
    cert.tangent_norms = Some(norms);
    Ok(cert)
}

fn pad(v: &[u32], extra: u32) -> Vec<u32> {
    let mut out = v.to_vec();
    out.push(extra);
    out
}

/// `G = F ^ (P y_{n+1} - 1)` on `n+1` pairs of variables. `P` is written over the original
/// `n` x/y variables and the parameters, and may only involve `x_I` and `y_J`.
pub fn augment_for_inverse(f: &PolynomialMap, p: &Polynomial, w: &Witness) -> Result<PolynomialMap> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = f.n();
    for t in p.terms() {
        if t.mono.x.len() != n || t.mono.y.len() != n || t.mono.z.len() != f.r() {
            return Err(Error::DimensionMismatch {
                what: "P exponents",
                expected: n,
                got: t.mono.x.len(),
            });
        }
        for k in 0..n {
            if t.mono.x[k] > 0 && !w.i.contains(&(k + 1)) {
                return Err(Error::InvalidArgument(format!("P uses x{} outside I", k + 1)));
            }
            if t.mono.y[k] > 0 && !w.j.contains(&(k + 1)) {
                return Err(Error::InvalidArgument(format!("P uses y{} outside J", k + 1)));
            }
        }
    }
    let mut comps: Vec<Vec<Term>> = f
        .components()
        .iter()
        .map(|c| {
            c.terms()
                .iter()
                .map(|t| Term::new(t.coeff.clone(), pad(&t.mono.x, 0), pad(&t.mono.y, 0), t.mono.z.clone()))
                .collect()
        })
        .collect();
    let mut last: Vec<Term> = p
        .terms()
        .iter()
        .map(|t| Term::new(t.coeff.clone(), pad(&t.mono.x, 0), pad(&t.mono.y, 1), t.mono.z.clone()))
        .collect();
    last.push(Term::int(-1, vec![0; n + 1], vec![0; n + 1], vec![0; f.r()]));
    comps.push(last);
    PolynomialMap::new(n + 1, f.r(), comps)
}

/// Extend a zero of `F` to a zero of the augmented map: `y_{n+1} = 1/P(x_I, y_J)` and
/// `x_{n+1} = 1 + max |x_i|`, which is nonzero and distinct from every `x_i`.
pub fn extend_point<T: FloatScalar>(
    p: &Polynomial,
    x: &[Complex<T>],
    y: &[Complex<T>],
    z: &[Complex<T>],
    prec: u32,
) -> Result<(Vec<Complex<T>>, Vec<Complex<T>>)> {
    let pv = p.evaluate(x, y, z, prec)?;
    if pv.re.is_zero() && pv.im.is_zero() {
        return Err(Error::InvalidArgument("P vanishes at the point".into()));
    }
    let one = Complex::new(T::from_f64(1.0, prec), T::zero());
    let big = x.iter().map(abs).fold(T::zero(), |m, a| if a > m { a } else { m });
    let mut xe = x.to_vec();
    xe.push(Complex::new(big + T::from_f64(1.0, prec), T::zero()));
    let mut ye = y.to_vec();
    ye.push(one / pv);
    Ok((xe, ye))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeBounds {
    /// `n(nr + n + r + 1)`
    pub inductive: BigUint,
    /// `n(r + 1) + r`
    pub finiteness: BigUint,
}

pub fn degree_bounds(n: u64, r: u64) -> Result<DegreeBounds> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be >= 1".into()));
    }
    let (n, r) = (BigUint::from(n), BigUint::from(r));
    let one = BigUint::from(1u8);
    Ok(DegreeBounds {
        inductive: &n * (&n * &r + &n + &r + &one),
        finiteness: &n * (&r + &one) + &r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::gaussian_int;
    use num_traits::Zero;
    use crate::BigFloat;
    use proptest::prelude::*;

    const P: u32 = 256;

    fn c(re: f64) -> Complex<BigFloat> {
        Complex::new(BigFloat::from_f64(re, P), BigFloat::zero())
    }

    fn tol() -> Tolerances<BigFloat> {
        Tolerances::defaults(P)
    }

    fn parabola() -> PolynomialMap {
        PolynomialMap::new(1, 0, vec![vec![Term::int(1, vec![0], vec![1], vec![]), Term::int(-1, vec![2], vec![0], vec![])]])
            .unwrap()
    }

    fn linear_pair() -> PolynomialMap {
        PolynomialMap::new(
            2,
            0,
            vec![
                vec![Term::int(1, vec![0, 0], vec![1, 0], vec![]), Term::int(-1, vec![0, 1], vec![0, 0], vec![])],
                vec![
                    Term::int(1, vec![0, 0], vec![0, 1], vec![]),
                    Term::int(-1, vec![1, 0], vec![0, 0], vec![]),
                    Term::int(-1, vec![0, 0], vec![0, 0], vec![]),
                ],
            ],
        )
        .unwrap()
    }

    fn x_minus_3() -> PolynomialMap {
        PolynomialMap::new(1, 0, vec![vec![Term::int(1, vec![1], vec![0], vec![]), Term::int(-3, vec![0], vec![0], vec![])]])
            .unwrap()
    }

    #[test]
    fn regular_examples() {
        let cert = certify_regular(&parabola(), &[], &[c(2.0)], &[c(4.0)], &tol(), P).unwrap();
        assert!(cert.regular);
        assert_eq!(cert.jacobian_rank, 1);
        assert!((cert.singular_values[0].to_f64() - 17f64.sqrt()).abs() < 1e-12);

        let sq = PolynomialMap::new(1, 0, vec![vec![Term::int(1, vec![0], vec![2], vec![])]]).unwrap();
        let cert = certify_regular(&sq, &[], &[c(1.0)], &[c(0.0)], &tol(), P).unwrap();
        assert!(!cert.regular);
        assert_eq!(cert.jacobian_rank, 0);

        let cert = certify_regular(&linear_pair(), &[], &[c(1.0), c(2.0)], &[c(2.0), c(2.0)], &tol(), P).unwrap();
        assert!(cert.regular);
        assert_eq!(cert.jacobian_rank, 2);
        // J J^H = 2 I
        for s in &cert.singular_values[..2] {
            assert!((s.to_f64() - 2f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn residual_gate_and_ambiguous_band() {
        assert!(matches!(
            certify_regular(&parabola(), &[], &[c(2.0)], &[c(4.1)], &tol(), P),
            Err(Error::NotAZero { .. })
        ));
        // (x1 + y1, x1 + (1+t) y1 + ...) scaled so that sigma_2/sigma_1 sits at the rank tolerance
        let t = tol();
        let q = t.rank_rel_tol.to_rational();
        let two = num_rational::BigRational::from_integer(2.into());
        let f = PolynomialMap::new(
            2,
            0,
            vec![
                vec![Term::int(1, vec![1, 0], vec![0, 0], vec![])],
                vec![Term::new(
                    Complex::new(q * two, num_rational::BigRational::zero()),
                    vec![0, 1],
                    vec![0, 0],
                    vec![],
                )],
            ],
        )
        .unwrap();
        assert!(matches!(
            certify_regular(&f, &[], &[c(0.0), c(0.0)], &[c(5.0), c(7.0)], &t, P),
            Err(Error::PrecisionExhausted { .. })
        ));
    }

    #[test]
    fn witness_examples() {
        let (w, d) = find_balanced_witness(&parabola(), &[], &[c(2.0)], &[c(4.0)], &tol(), P)
            .unwrap()
            .unwrap();
        // |d/dx1| = 4 beats |d/dy1| = 1
        assert_eq!(w, Witness { i: vec![1], j: vec![] });
        assert_eq!(d.to_f64(), 4.0);

        let id = PolynomialMap::new(1, 0, vec![vec![Term::int(1, vec![0], vec![1], vec![]), Term::int(-1, vec![1], vec![0], vec![])]])
            .unwrap();
        assert!(matches!(
            find_balanced_witness(&id, &[], &[c(0.0)], &[c(0.0)], &tol(), P),
            Err(Error::DistinctnessViolated(_))
        ));

        let (w, d) = find_balanced_witness(&linear_pair(), &[], &[c(1.0), c(2.0)], &[c(2.0), c(2.0)], &tol(), P)
            .unwrap()
            .unwrap();
        // I = {} and I = {1,2} tie at |det| = 1
        assert_eq!(w, Witness { i: vec![], j: vec![1, 2] });
        assert_eq!(d.to_f64(), 1.0);
    }

    #[test]
    fn well_balanced_examples() {
        let cert = certify_well_balanced(&parabola(), &[], &[c(2.0)], &[c(4.0)], &tol(), P).unwrap();
        assert!(cert.regular && cert.balanced && cert.well_balanced);
        // kernel (1,4)/sqrt(17)
        let tn = cert.tangent_norms.unwrap()[0].to_f64();
        assert!((tn - 1.0 / 17f64.sqrt()).abs() < 1e-12);

        let cert = certify_well_balanced(&x_minus_3(), &[], &[c(3.0)], &[c(1.0)], &tol(), P).unwrap();
        assert!(cert.regular && cert.balanced && !cert.well_balanced);

        let cert = certify_well_balanced(&linear_pair(), &[], &[c(1.0), c(2.0)], &[c(2.0), c(2.0)], &tol(), P).unwrap();
        assert!(cert.well_balanced);
        for v in cert.tangent_norms.unwrap() {
            assert!((v.to_f64() - 0.5f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn augmentation_examples() {
        let f = parabola();
        let p = Polynomial::new(vec![Term::int(1, vec![1], vec![0], vec![])]);
        let w = Witness { i: vec![1], j: vec![] };
        let g = augment_for_inverse(&f, &p, &w).unwrap();
        assert_eq!(g.n(), 2);
        let (xe, ye) = extend_point(&p, &[c(2.0)], &[c(4.0)], &[], P).unwrap();
        assert_eq!(ye[1].re.to_f64(), 0.5);
        assert!(xe[1].re.to_f64() != 0.0 && xe[1].re.to_f64() != 2.0);
        let cert = certify_well_balanced(&g, &[], &xe, &ye, &tol(), P).unwrap();
        assert!(cert.regular && cert.balanced);
        assert_eq!(cert.jacobian_rank, 2);
        // last row of the block form: d/dx1 = y2 = 1/2, d/dy2 = P = 2
        let num = g.numeric::<BigFloat>(P).unwrap();
        let jac = num.jacobian(&xe, &ye, &[]).unwrap();
        assert_eq!(jac[1][0].re.to_f64(), 0.5);
        assert!(jac[1][1].re.is_zero() && jac[1][2].re.is_zero());
        assert_eq!(jac[1][3].re.to_f64(), 2.0);

        let one = Polynomial::new(vec![Term::int(1, vec![0], vec![0], vec![])]);
        let g = augment_for_inverse(&f, &one, &Witness { i: vec![], j: vec![1] }).unwrap();
        assert_eq!(g.components()[1].terms().len(), 2);
        let (_, ye) = extend_point(&one, &[c(2.0)], &[c(4.0)], &[], P).unwrap();
        assert_eq!(ye[1].re.to_f64(), 1.0);

        assert_eq!(augment_for_inverse(&f, &Polynomial::new(vec![]), &w), Err(Error::ZeroPolynomial));
        let bad = Polynomial::new(vec![Term::new(gaussian_int(1), vec![0], vec![1], vec![])]);
        assert!(matches!(augment_for_inverse(&f, &bad, &w), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn degree_bound_examples() {
        let b = |n, r| {
            let d = degree_bounds(n, r).unwrap();
            (d.inductive.to_string(), d.finiteness.to_string())
        };
        assert_eq!(b(2, 1), ("12".into(), "5".into()));
        assert_eq!(b(1, 0), ("2".into(), "1".into()));
        assert_eq!(b(3, 2), ("36".into(), "11".into()));
        assert!(degree_bounds(0, 1).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        // Scaling one component scales every candidate determinant by the same factor.
        #[test]
        fn witness_invariant_under_component_scaling(
            entries in proptest::collection::vec(-4i64..=4, 8),
            k in 1i64..=9,
        ) {
            let to_c = |v: i64| c(v as f64);
            let jac: Matrix<BigFloat> = vec![entries[..4].iter().copied().map(to_c).collect(), entries[4..].iter().copied().map(to_c).collect()];
            let mut scaled = jac.clone();
            for e in scaled[1].iter_mut() {
                *e = e.clone() * c(k as f64);
            }
            let t = tol();
            let a = select_witness(&jac, &t.det_tol, P).map(|p| p.0);
            let b = select_witness(&scaled, &t.det_tol, P).map(|p| p.0);
            prop_assert_eq!(a, b);
        }
    }
}
