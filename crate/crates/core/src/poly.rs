//! Sparse polynomial maps `F: C^n x C^n x C^r -> C^n` with exact Gaussian-rational
//! coefficients, and their composition with truncated Liouville series.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::complex::{abs_l1, from_gaussian};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{FloatScalar, Scalar};
use crate::series::{LiouvilleSequence, PartialSum};
use crate::GaussianRational;

/// Exponent vectors for the `x`, `y` and `z` blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub x: Vec<u32>,
    pub y: Vec<u32>,
    pub z: Vec<u32>,
}

impl Monomial {
    pub fn total_degree(&self) -> u32 {
        self.x.iter().chain(&self.y).chain(&self.z).sum()
    }

    fn sort_key(&self) -> (u32, Vec<u32>, Vec<u32>, Vec<u32>) {
        (self.total_degree(), self.x.clone(), self.y.clone(), self.z.clone())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: GaussianRational,
    pub mono: Monomial,
}

impl Term {
    pub fn new(coeff: GaussianRational, x: Vec<u32>, y: Vec<u32>, z: Vec<u32>) -> Self {
        Term {
            coeff,
            mono: Monomial { x, y, z },
        }
    }

    /// Integer-coefficient shorthand.
    pub fn int(c: i64, x: Vec<u32>, y: Vec<u32>, z: Vec<u32>) -> Self {
        Self::new(
            Complex::new(BigRational::from_integer(c.into()), BigRational::zero()),
            x,
            y,
            z,
        )
    }
}

/// A single polynomial in canonical form: merged monomials, no zero coefficients,
/// terms ordered by total degree then exponents.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Polynomial {
    terms: Vec<Term>,
}

impl Polynomial {
    pub fn new(terms: Vec<Term>) -> Self {
        let mut merged: BTreeMap<(u32, Vec<u32>, Vec<u32>, Vec<u32>), Term> = BTreeMap::new();
        for t in terms {
            merged
                .entry(t.mono.sort_key())
                .and_modify(|e| e.coeff = e.coeff.clone() + t.coeff.clone())
                .or_insert(t);
        }
        Polynomial {
            terms: merged
                .into_values()
                .filter(|t| !t.coeff.is_zero())
                .collect(),
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.mono.total_degree()).max().unwrap_or(0)
    }

    pub fn evaluate<T: Scalar>(
        &self,
        x: &[Complex<T>],
        y: &[Complex<T>],
        z: &[Complex<T>],
        prec: u32,
    ) -> Result<Complex<T>> {
        self.check_dims(x.len(), z.len())?;
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((from_gaussian::<T>(&t.coeff, prec)?, t.mono.clone())))
            .collect::<Result<Vec<_>>>()?;
        let single = NumericMap {
            n: x.len(),
            r: z.len(),
            components: vec![terms],
        };
        Ok(single.evaluate(x, y, z)?.swap_remove(0))
    }

    fn check_dims(&self, n: usize, r: usize) -> Result<()> {
        for t in &self.terms {
            for (what, len, want) in [
                ("x exponents", t.mono.x.len(), n),
                ("y exponents", t.mono.y.len(), n),
                ("z exponents", t.mono.z.len(), r),
            ] {
                if len != want {
                    return Err(Error::DimensionMismatch {
                        what,
                        expected: want,
                        got: len,
                    });
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialMap {
    n: usize,
    r: usize,
    components: Vec<Polynomial>,
}

impl PolynomialMap {
    pub fn new(n: usize, r: usize, components: Vec<Vec<Term>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be >= 1".into()));
        }
        if components.len() != n {
            return Err(Error::DimensionMismatch {
                what: "component count",
                expected: n,
                got: components.len(),
            });
        }
        let components: Vec<Polynomial> = components.into_iter().map(Polynomial::new).collect();
        for c in &components {
            c.check_dims(n, r)?;
        }
        Ok(PolynomialMap { n, r, components })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn max_degree(&self) -> u32 {
        self.components.iter().map(Polynomial::degree).max().unwrap_or(0)
    }

    /// Coefficients converted to `T` once, for repeated evaluation.
    pub fn numeric<T: Scalar>(&self, prec: u32) -> Result<NumericMap<T>> {
        let components = self
            .components
            .iter()
            .map(|p| {
                p.terms
                    .iter()
                    .map(|t| Ok((from_gaussian::<T>(&t.coeff, prec)?, t.mono.clone())))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(NumericMap {
            n: self.n,
            r: self.r,
            components,
        })
    }
}

/// A [`PolynomialMap`] with coefficients rounded into `T`.
#[derive(Clone, Debug)]
pub struct NumericMap<T> {
    n: usize,
    r: usize,
    components: Vec<Vec<(Complex<T>, Monomial)>>,
}

fn power_table<T: Scalar>(v: &Complex<T>, max: u32) -> Vec<Complex<T>> {
    let mut p = Vec::with_capacity(max as usize + 1);
    p.push(Complex::new(T::one(), T::zero()));
    for k in 1..=max as usize {
        let next = p[k - 1].clone() * v.clone();
        p.push(next);
    }
    p
}

/// Powers of each variable, indexed `[block][var][exponent]`.
struct Powers<T> {
    blocks: [Vec<Vec<Complex<T>>>; 3],
}

impl<T: Scalar> Powers<T> {
    fn new<'a>(
        comps: impl Iterator<Item = &'a Monomial>,
        x: &[Complex<T>],
        y: &[Complex<T>],
        z: &[Complex<T>],
    ) -> Self {
        let mut max = [vec![0u32; x.len()], vec![0u32; y.len()], vec![0u32; z.len()]];
        for m in comps {
            for (b, exps) in [&m.x, &m.y, &m.z].into_iter().enumerate() {
                for (k, e) in exps.iter().enumerate() {
                    max[b][k] = max[b][k].max(*e);
                }
            }
        }
        let table = |vals: &[Complex<T>], maxes: &[u32]| -> Vec<Vec<Complex<T>>> {
            vals.iter().zip(maxes).map(|(v, m)| power_table(v, *m)).collect()
        };
        Powers {
            blocks: [table(x, &max[0]), table(y, &max[1]), table(z, &max[2])],
        }
    }

    /// Monomial value, optionally with one variable's exponent lowered by one.
    fn monomial(&self, m: &Monomial, skip: Option<(usize, usize)>) -> Complex<T> {
        let mut acc = Complex::new(T::one(), T::zero());
        for (b, exps) in [&m.x, &m.y, &m.z].into_iter().enumerate() {
            for (k, &e) in exps.iter().enumerate() {
                let e = if skip == Some((b, k)) { e - 1 } else { e };
                if e > 0 {
                    acc = acc * self.blocks[b][k][e as usize].clone();
                }
            }
        }
        acc
    }
}

impl<T: Scalar> NumericMap<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    fn check(&self, x: &[Complex<T>], y: &[Complex<T>], z: &[Complex<T>]) -> Result<()> {
        for (what, len, want) in [("x", x.len(), self.n), ("y", y.len(), self.n), ("z", z.len(), self.r)] {
            if len != want {
                return Err(Error::DimensionMismatch {
                    what,
                    expected: want,
                    got: len,
                });
            }
        }
        Ok(())
    }

    fn powers(&self, x: &[Complex<T>], y: &[Complex<T>], z: &[Complex<T>]) -> Powers<T> {
        Powers::new(
            self.components.iter().flatten().map(|(_, m)| m),
            x,
            y,
            z,
        )
    }

    pub fn evaluate(&self, x: &[Complex<T>], y: &[Complex<T>], z: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        self.check(x, y, z)?;
        let pw = self.powers(x, y, z);
        Ok(self
            .components
            .iter()
            .map(|terms| {
                terms.iter().fold(Complex::new(T::zero(), T::zero()), |acc, (c, m)| {
                    acc + c.clone() * pw.monomial(m, None)
                })
            })
            .collect())
    }

    /// `n x 2n` matrix of partials with respect to `x_1..x_n, y_1..y_n`.
    pub fn jacobian(&self, x: &[Complex<T>], y: &[Complex<T>], z: &[Complex<T>]) -> Result<Matrix<T>> {
        self.check(x, y, z)?;
        let pw = self.powers(x, y, z);
        let n = self.n;
        let mut jac = vec![vec![Complex::new(T::zero(), T::zero()); 2 * n]; n];
        for (row, terms) in self.components.iter().enumerate() {
            for (c, m) in terms {
                for (b, exps) in [&m.x, &m.y].into_iter().enumerate() {
                    for (k, &e) in exps.iter().enumerate() {
                        if e == 0 {
                            continue;
                        }
                        let factor = T::from_integer(i64::from(e), 0).expect("small integer");
                        let v = c.clone() * pw.monomial(m, Some((b, k))).scale(factor);
                        let col = b * n + k;
                        jac[row][col] = jac[row][col].clone() + v;
                    }
                }
            }
        }
        Ok(jac)
    }
}

pub fn evaluate<T: Scalar>(
    f: &PolynomialMap,
    x: &[Complex<T>],
    y: &[Complex<T>],
    z: &[Complex<T>],
    prec: u32,
) -> Result<Vec<Complex<T>>> {
    f.numeric::<T>(prec)?.evaluate(x, y, z)
}

pub fn jacobian<T: Scalar>(
    f: &PolynomialMap,
    x: &[Complex<T>],
    y: &[Complex<T>],
    z: &[Complex<T>],
    prec: u32,
) -> Result<Matrix<T>> {
    f.numeric::<T>(prec)?.jacobian(x, y, z)
}

/// `x -> F(x, H_{d,eps}(x), z)` with `H` applied componentwise and `z` fixed.
#[derive(Clone, Debug)]
pub struct ComposedSystem<T> {
    map: Arc<PolynomialMap>,
    seq: Arc<LiouvilleSequence>,
    numeric: Arc<NumericMap<T>>,
    z: Vec<Complex<T>>,
    sum: PartialSum<T>,
    prec: u32,
}

impl<T: Scalar> ComposedSystem<T> {
    pub fn new(
        map: Arc<PolynomialMap>,
        seq: Arc<LiouvilleSequence>,
        z: Vec<Complex<T>>,
        d: usize,
        eps: Complex<T>,
        prec: u32,
    ) -> Result<Self> {
        if z.len() != map.r() {
            return Err(Error::DimensionMismatch {
                what: "parameters",
                expected: map.r(),
                got: z.len(),
            });
        }
        let numeric = Arc::new(map.numeric::<T>(prec)?);
        let sum = PartialSum::new(&seq, d, eps, prec)?;
        Ok(ComposedSystem {
            map,
            seq,
            numeric,
            z,
            sum,
            prec,
        })
    }

    pub fn n(&self) -> usize {
        self.map.n()
    }

    pub fn degree(&self) -> usize {
        self.sum.degree()
    }

    pub fn eps(&self) -> &Complex<T> {
        self.sum.eps()
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn map(&self) -> &Arc<PolynomialMap> {
        &self.map
    }

    pub fn sequence(&self) -> &Arc<LiouvilleSequence> {
        &self.seq
    }

    pub fn params(&self) -> &[Complex<T>] {
        &self.z
    }

    pub fn partial_sum(&self) -> &PartialSum<T> {
        &self.sum
    }

    pub fn with_eps(&self, eps: Complex<T>) -> Result<Self> {
        Ok(ComposedSystem {
            sum: self.sum.with_eps(eps, self.prec)?,
            ..self.clone()
        })
    }

    /// `y_i = H_{d,eps}(x_i)`.
    pub fn lift(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        x.iter().map(|xi| self.sum.eval(xi)).collect()
    }

    pub fn eval(&self, x: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        let y = self.lift(x);
        self.numeric.evaluate(x, &y, &self.z)
    }

    /// Chain rule: `dF/dx + dF/dy * diag(H'_{d,eps}(x_i))`.
    pub fn jacobian(&self, x: &[Complex<T>]) -> Result<Matrix<T>> {
        let n = self.n();
        let y = self.lift(x);
        let full = self.numeric.jacobian(x, &y, &self.z)?;
        let dh: Vec<Complex<T>> = x.iter().map(|xi| self.sum.derivative(xi)).collect();
        Ok(full
            .into_iter()
            .map(|row| {
                (0..n)
                    .map(|j| row[j].clone() + row[n + j].clone() * dh[j].clone())
                    .collect()
            })
            .collect())
    }

    /// `dPhi/d eps = dF/dy * (x_i^(d+1))_i`.
    pub fn eps_derivative(&self, x: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        let n = self.n();
        let y = self.lift(x);
        let full = self.numeric.jacobian(x, &y, &self.z)?;
        let w: Vec<Complex<T>> = x.iter().map(|xi| self.sum.eps_derivative(xi)).collect();
        Ok(full
            .into_iter()
            .map(|row| {
                (0..n).fold(Complex::new(T::zero(), T::zero()), |acc, j| {
                    acc + row[n + j].clone() * w[j].clone()
                })
            })
            .collect())
    }
}

impl<T: FloatScalar> ComposedSystem<T> {
    /// Rebuild every cached constant at a new precision.
    pub fn with_precision(&self, prec: u32) -> Result<Self> {
        let z = self.z.iter().map(|v| crate::complex::with_precision(v, prec)).collect();
        let eps = crate::complex::with_precision(self.sum.eps(), prec);
        Self::new(self.map.clone(), self.seq.clone(), z, self.degree(), eps, prec)
    }
}

pub fn compose_eval<T: Scalar>(system: &ComposedSystem<T>, x: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    system.eval(x)
}

pub fn compose_jacobian<T: Scalar>(system: &ComposedSystem<T>, x: &[Complex<T>]) -> Result<Matrix<T>> {
    system.jacobian(x)
}

/// Upper bound on `max_k sum_j |dF_k/dy_j|` over `|x_i| <= rho_x`, `|y_j| <= rho_y` at the
/// given parameters, from coefficient magnitudes. Rounded upward.
pub fn lipschitz_y_bound<T: FloatScalar>(
    f: &PolynomialMap,
    z: &[Complex<T>],
    rho_x: &T,
    rho_y: &T,
    prec: u32,
) -> Result<T> {
    let zabs: Vec<T> = z.iter().map(|v| v.re.abs().add_up(&v.im.abs(), prec)).collect();
    let pow_up = |base: &T, e: u32| -> T {
        (0..e).fold(T::from_f64(1.0, prec), |acc, _| acc.mul_up(base, prec))
    };
    let mut best = T::zero();
    for comp in f.components() {
        let mut row = T::zero();
        for t in comp.terms() {
            let c = from_gaussian::<T>(&t.coeff, prec)?;
            // rounding of the coefficient conversion is absorbed by one ulp of headroom
            let cabs = abs_l1(&c).mul_up(&(T::from_f64(1.0, prec) + T::epsilon(prec)), prec);
            let mut zpart = T::from_f64(1.0, prec);
            for (k, &e) in t.mono.z.iter().enumerate() {
                zpart = zpart.mul_up(&pow_up(&zabs[k], e), prec);
            }
            let xdeg: u32 = t.mono.x.iter().sum();
            let ydeg: u32 = t.mono.y.iter().sum();
            if ydeg == 0 {
                continue;
            }
            let sum_ey = T::from_f64(f64::from(ydeg), prec);
            let v = cabs
                .mul_up(&zpart, prec)
                .mul_up(&pow_up(rho_x, xdeg), prec)
                .mul_up(&pow_up(rho_y, ydeg - 1), prec)
                .mul_up(&sum_ey, prec);
            row = row.add_up(&v, prec);
        }
        if row > best {
            best = row;
        }
    }
    Ok(best)
}

impl Zero for Polynomial {
    fn zero() -> Self {
        Polynomial::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl std::ops::Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        Polynomial::new(self.terms.into_iter().chain(rhs.terms).collect())
    }
}

/// Gaussian-rational shorthand: `re_num/re_den + i * im_num/im_den`.
pub fn gaussian(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> GaussianRational {
    Complex::new(
        BigRational::new(re_num.into(), re_den.into()),
        BigRational::new(im_num.into(), im_den.into()),
    )
}

pub fn gaussian_int(v: i64) -> GaussianRational {
    Complex::new(BigRational::from_integer(v.into()), BigRational::zero())
}

#[allow(dead_code)]
fn one_gaussian() -> GaussianRational {
    Complex::new(BigRational::one(), BigRational::zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::BigFloat;

    type Q = BigRational;

    fn cq(n: i64, d: i64) -> Complex<Q> {
        Complex::new(Q::new(n.into(), d.into()), Q::zero())
    }

    fn parabola() -> PolynomialMap {
        // y1 - x1^2
        PolynomialMap::new(1, 0, vec![vec![Term::int(1, vec![0], vec![1], vec![]), Term::int(-1, vec![2], vec![0], vec![])]])
            .unwrap()
    }

    fn linear_pair() -> PolynomialMap {
        // (y1 - x2, y2 - x1 - 1)
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

    #[test]
    fn canonical_form_merges_and_drops_zeros() {
        let p = Polynomial::new(vec![
            Term::int(2, vec![1], vec![0], vec![]),
            Term::int(-2, vec![1], vec![0], vec![]),
            Term::int(3, vec![0], vec![1], vec![]),
            Term::int(1, vec![0], vec![1], vec![]),
        ]);
        assert_eq!(p.terms().len(), 1);
        assert_eq!(p.terms()[0].coeff, gaussian_int(4));
    }

    #[test]
    fn dimension_checks() {
        assert!(matches!(
            PolynomialMap::new(1, 0, vec![vec![Term::int(1, vec![0, 1], vec![0], vec![])]]),
            Err(Error::DimensionMismatch { .. })
        ));
        let f = parabola();
        assert!(matches!(
            evaluate::<Q>(&f, &[cq(1, 1), cq(1, 1)], &[cq(1, 1)], &[], 0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(evaluate::<Q>(&parabola(), &[cq(2, 1)], &[cq(4, 1)], &[], 0).unwrap(), vec![cq(0, 1)]);
        // z x^2 - 2x + 1 at x = 1/2, z = 0
        let f = PolynomialMap::new(
            1,
            1,
            vec![vec![
                Term::int(1, vec![2], vec![0], vec![1]),
                Term::int(-2, vec![1], vec![0], vec![0]),
                Term::int(1, vec![0], vec![0], vec![0]),
            ]],
        )
        .unwrap();
        assert_eq!(evaluate::<Q>(&f, &[cq(1, 2)], &[cq(0, 1)], &[cq(0, 1)], 0).unwrap(), vec![cq(0, 1)]);
        assert_eq!(
            evaluate::<Q>(&linear_pair(), &[cq(1, 1), cq(2, 1)], &[cq(2, 1), cq(2, 1)], &[], 0).unwrap(),
            vec![cq(0, 1), cq(0, 1)]
        );
    }

    #[test]
    fn jacobian_examples() {
        let j = jacobian::<Q>(&parabola(), &[cq(2, 1)], &[cq(4, 1)], &[], 0).unwrap();
        assert_eq!(j, vec![vec![cq(-4, 1), cq(1, 1)]]);
        let j = jacobian::<Q>(&linear_pair(), &[cq(5, 3), cq(-7, 1)], &[cq(1, 9), cq(2, 1)], &[], 0).unwrap();
        assert_eq!(
            j,
            vec![
                vec![cq(0, 1), cq(-1, 1), cq(1, 1), cq(0, 1)],
                vec![cq(-1, 1), cq(0, 1), cq(0, 1), cq(1, 1)]
            ]
        );
        let prod = PolynomialMap::new(1, 0, vec![vec![Term::int(1, vec![1], vec![1], vec![]), Term::int(-1, vec![0], vec![0], vec![])]])
            .unwrap();
        let j = jacobian::<Q>(&prod, &[cq(2, 1)], &[cq(1, 2)], &[], 0).unwrap();
        assert_eq!(j, vec![vec![cq(1, 2), cq(2, 1)]]);
    }

    fn composed_q(f: PolynomialMap, d: usize, eps: Complex<Q>) -> ComposedSystem<Q> {
        ComposedSystem::new(Arc::new(f), Arc::new(LiouvilleSequence::default_tower(8)), vec![], d, eps, 0).unwrap()
    }

    fn y_minus_one() -> PolynomialMap {
        PolynomialMap::new(1, 0, vec![vec![Term::int(1, vec![0], vec![1], vec![]), Term::int(-1, vec![0], vec![0], vec![])]])
            .unwrap()
    }

    #[test]
    fn compose_eval_examples() {
        let s = composed_q(y_minus_one(), 1, cq(0, 1));
        assert_eq!(compose_eval(&s, &[cq(2, 1)]).unwrap(), vec![cq(0, 1)]);
        let s = composed_q(parabola(), 1, cq(0, 1));
        assert_eq!(compose_eval(&s, &[cq(1, 2)]).unwrap(), vec![cq(0, 1)]);
        let s = composed_q(y_minus_one(), 1, cq(1, 2));
        assert_eq!(compose_eval(&s, &[cq(1, 1)]).unwrap(), vec![cq(0, 1)]);
    }

    #[test]
    fn compose_jacobian_examples() {
        let s = composed_q(parabola(), 1, cq(0, 1));
        assert_eq!(compose_jacobian(&s, &[cq(1, 2)]).unwrap(), vec![vec![cq(-1, 2)]]);
        let s = composed_q(y_minus_one(), 2, cq(0, 1));
        assert_eq!(compose_jacobian(&s, &[cq(1, 1)]).unwrap(), vec![vec![cq(3, 2)]]);
    }

    #[test]
    fn endpoint_identity_through_map() {
        let seq = Arc::new(LiouvilleSequence::default_tower(8));
        let f = Arc::new(linear_pair());
        for d in 1..4 {
            let eps = seq.coefficient_complex::<Q>(d + 1, 0).unwrap();
            let a = ComposedSystem::new(f.clone(), seq.clone(), vec![], d, eps, 0).unwrap();
            let b = ComposedSystem::new(f.clone(), seq.clone(), vec![], d + 1, cq(0, 1), 0).unwrap();
            let x = vec![cq(3, 7), cq(-5, 4)];
            assert_eq!(a.eval(&x).unwrap(), b.eval(&x).unwrap());
            assert_eq!(a.jacobian(&x).unwrap(), b.jacobian(&x).unwrap());
        }
    }

    #[test]
    fn lipschitz_bound_dominates_partials() {
        // x1*y1^2 - 3 y1 + 2: dF/dy = 2 x y - 3; |.| <= 2*rx*ry + 3
        let f = PolynomialMap::new(
            1,
            0,
            vec![vec![
                Term::int(1, vec![1], vec![2], vec![]),
                Term::int(-3, vec![0], vec![1], vec![]),
                Term::int(2, vec![0], vec![0], vec![]),
            ]],
        )
        .unwrap();
        let rx = BigFloat::from_f64(1.5, 128);
        let ry = BigFloat::from_f64(2.0, 128);
        let l = lipschitz_y_bound::<BigFloat>(&f, &[], &rx, &ry, 128).unwrap();
        let nine = BigRational::from_integer(9.into());
        let excess = l.to_rational() - nine;
        assert!(excess >= BigRational::zero());
        assert!(excess < BigRational::new(1.into(), num_bigint::BigInt::from(1u64 << 60)));
    }
}
