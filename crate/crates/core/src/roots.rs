//! Univariate polynomial roots and the minimal isolated-root norm `N_F(z)`.

use num_complex::Complex;

use crate::complex::{abs, from_gaussian};
use crate::error::{Error, Result};
use crate::poly::{ComposedSystem, PolynomialMap};
use crate::scalar::FloatScalar;

fn czero<T: FloatScalar>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

fn poly_mul<T: FloatScalar>(a: &[Complex<T>], b: &[Complex<T>]) -> Vec<Complex<T>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![czero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

fn add_into<T: FloatScalar>(acc: &mut Vec<Complex<T>>, p: &[Complex<T>], shift: usize) {
    if acc.len() < p.len() + shift {
        acc.resize(p.len() + shift, czero());
    }
    for (k, c) in p.iter().enumerate() {
        acc[k + shift] = acc[k + shift].clone() + c.clone();
    }
}

fn z_factor<T: FloatScalar>(zexp: &[u32], z: &[Complex<T>]) -> Complex<T> {
    let mut v = Complex::new(T::one(), T::zero());
    for (e, zk) in zexp.iter().zip(z) {
        for _ in 0..*e {
            v = v * zk.clone();
        }
    }
    v
}

/// Coefficients (lowest degree first) of `x -> F(x, h(x), z)` for an `n = 1` map, where `h`
/// is given by its coefficients. `h = None` requires `F` to be free of `y`.
fn expand<T: FloatScalar>(
    f: &PolynomialMap,
    z: &[Complex<T>],
    h: Option<&[Complex<T>]>,
    prec: u32,
) -> Result<Vec<Complex<T>>> {
    if f.n() != 1 {
        return Err(Error::InvalidArgument("univariate expansion needs n = 1".into()));
    }
    if z.len() != f.r() {
        return Err(Error::DimensionMismatch {
            what: "parameters",
            expected: f.r(),
            got: z.len(),
        });
    }
    let mut hpow: Vec<Vec<Complex<T>>> = vec![vec![Complex::new(T::one(), T::zero())]];
    let mut out = Vec::new();
    for t in f.components()[0].terms() {
        let ye = t.mono.y[0] as usize;
        if ye > 0 && h.is_none() {
            return Err(Error::InvalidArgument("polynomial depends on y".into()));
        }
        while hpow.len() <= ye {
            let next = poly_mul(hpow.last().unwrap(), h.unwrap());
            hpow.push(next);
        }
        let c = from_gaussian::<T>(&t.coeff, prec)? * z_factor(&t.mono.z, z);
        let scaled: Vec<Complex<T>> = hpow[ye].iter().map(|v| v.clone() * c.clone()).collect();
        add_into(&mut out, &scaled, t.mono.x[0] as usize);
    }
    Ok(out)
}

/// `F(x, z)` as a polynomial in `x` (no `y` allowed).
pub fn univariate_from_map<T: FloatScalar>(f: &PolynomialMap, z: &[Complex<T>], prec: u32) -> Result<Vec<Complex<T>>> {
    expand(f, z, None, prec)
}

/// `F(x, H_{d,eps}(x), z)` as a polynomial in `x`.
pub fn univariate_from_composed<T: FloatScalar>(sys: &ComposedSystem<T>) -> Result<Vec<Complex<T>>> {
    let sum = sys.partial_sum();
    let mut h = vec![czero()];
    h.extend(sum.coefficients().iter().cloned());
    h.push(sum.eps().clone());
    expand(sys.map(), sys.params(), Some(&h), sys.precision())
}

fn trim<T: FloatScalar>(coeffs: &[Complex<T>]) -> &[Complex<T>] {
    let mut end = coeffs.len();
    while end > 0 && coeffs[end - 1].re.is_zero() && coeffs[end - 1].im.is_zero() {
        end -= 1;
    }
    &coeffs[..end]
}

fn horner<T: FloatScalar>(c: &[Complex<T>], x: &Complex<T>) -> (Complex<T>, Complex<T>) {
    let mut p = czero();
    let mut dp = czero();
    for a in c.iter().rev() {
        dp = dp * x.clone() + p.clone();
        p = p * x.clone() + a.clone();
    }
    (p, dp)
}

/// All roots of a polynomial given lowest degree first, by Aberth–Ehrlich iteration.
/// Returns an empty vector for constants (including the zero polynomial).
pub fn polynomial_roots<T: FloatScalar>(coeffs: &[Complex<T>], prec: u32) -> Vec<Complex<T>> {
    let c = trim(coeffs);
    if c.len() <= 1 {
        return Vec::new();
    }
    let deg = c.len() - 1;
    if deg == 1 {
        return vec![-(c[0].clone() / c[1].clone())];
    }
    let lead = abs(&c[deg]);
    // Cauchy bound on root moduli
    let radius = c[..deg]
        .iter()
        .map(|a| abs(a) / lead.clone())
        .fold(T::zero(), |m, v| if v > m { v } else { m })
        + T::from_f64(1.0, prec);
    let mut roots: Vec<Complex<T>> = (0..deg)
        .map(|k| {
            let ang = std::f64::consts::TAU * k as f64 / deg as f64 + 0.4;
            Complex::new(
                radius.clone() * T::from_f64(ang.cos(), prec),
                radius.clone() * T::from_f64(ang.sin(), prec),
            )
        })
        .collect();
    let tol = T::epsilon(prec).mul_up(&T::from_f64(16.0, prec), prec);
    let one = Complex::new(T::one(), T::zero());
    for _ in 0..(500 + 8 * prec as usize) {
        let mut moved = false;
        for k in 0..deg {
            let (p, dp) = horner(c, &roots[k]);
            if p.re.is_zero() && p.im.is_zero() {
                continue;
            }
            if dp.re.is_zero() && dp.im.is_zero() {
                roots[k] = roots[k].clone() + Complex::new(tol.clone(), tol.clone());
                moved = true;
                continue;
            }
            let ratio = p / dp;
            let mut s = czero();
            for j in 0..deg {
                if j != k {
                    let diff = roots[k].clone() - roots[j].clone();
                    if !(diff.re.is_zero() && diff.im.is_zero()) {
                        s = s + one.clone() / diff;
                    }
                }
            }
            let w = ratio.clone() / (one.clone() - ratio * s);
            let scale = abs(&roots[k]) + T::from_f64(1.0, prec);
            if abs(&w) > tol.clone() * scale {
                moved = true;
            }
            roots[k] = roots[k].clone() - w;
        }
        if !moved {
            break;
        }
    }
    roots
}

/// `min |x|` over the roots of `F(x, z)`, `None` standing for `+infinity` (no roots, or the
/// zero polynomial, whose roots are not isolated).
pub fn min_isolated_root_norm<T: FloatScalar>(coeffs: &[Complex<T>], prec: u32) -> Option<T> {
    polynomial_roots(coeffs, prec)
        .iter()
        .map(abs)
        .fold(None, |m: Option<T>, v| match m {
            Some(m) if m <= v => Some(m),
            _ => Some(v),
        })
}
