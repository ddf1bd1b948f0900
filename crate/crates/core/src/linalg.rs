//! Dense complex linear algebra for the small systems that show up here (a handful of rows).

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::complex::{abs_l1, norm_sqr};
use crate::error::{Error, Result};
use crate::scalar::{FloatScalar, Scalar};

/// Row-major dense matrix.
pub type Matrix<T> = Vec<Vec<Complex<T>>>;

fn pivot_row<T: Scalar>(a: &Matrix<T>, col: usize) -> (usize, T) {
    let mut best = col;
    let mut best_mag = abs_l1(&a[col][col]);
    for (r, row) in a.iter().enumerate().skip(col + 1) {
        let m = abs_l1(&row[col]);
        if m > best_mag {
            best = r;
            best_mag = m;
        }
    }
    (best, best_mag)
}

/// Determinant by Gaussian elimination with partial pivoting. Exact for exact scalars.
pub fn determinant<T: Scalar>(a: &Matrix<T>) -> Complex<T> {
    let n = a.len();
    let mut m = a.clone();
    let mut det = Complex::<T>::one();
    for col in 0..n {
        let (p, mag) = pivot_row(&m, col);
        if mag.is_zero() {
            return Complex::zero();
        }
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det = det * pivot.clone();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone() / pivot.clone();
            for c in col..n {
                let v = m[col][c].clone() * f.clone();
                m[r][c] = m[r][c].clone() - v;
            }
        }
    }
    det
}

/// Solve `a x = b`. A pivot with `|re|+|im| <= pivot_floor` is reported as singular.
pub fn lu_solve<T: Scalar>(a: &Matrix<T>, b: &[Complex<T>], pivot_floor: &T) -> Result<Vec<Complex<T>>> {
    let n = a.len();
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            what: "right-hand side",
            expected: n,
            got: b.len(),
        });
    }
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let (p, mag) = pivot_row(&m, col);
        if mag <= *pivot_floor || mag.is_zero() {
            return Err(Error::SingularJacobian);
        }
        m.swap(p, col);
        rhs.swap(p, col);
        let pivot = m[col][col].clone();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone() / pivot.clone();
            for c in col..n {
                let v = m[col][c].clone() * f.clone();
                m[r][c] = m[r][c].clone() - v;
            }
            let v = rhs[col].clone() * f;
            rhs[r] = rhs[r].clone() - v;
        }
    }
    let mut x = vec![Complex::<T>::zero(); n];
    for row in (0..n).rev() {
        let mut acc = rhs[row].clone();
        for c in row + 1..n {
            acc = acc - m[row][c].clone() * x[c].clone();
        }
        x[row] = acc / m[row][row].clone();
    }
    Ok(x)
}

pub fn mat_vec<T: Scalar>(a: &Matrix<T>, v: &[Complex<T>]) -> Vec<Complex<T>> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Complex::<T>::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
        })
        .collect()
}

/// Singular values (descending) and the matching right singular vectors.
#[derive(Clone, Debug)]
pub struct Svd<T> {
    pub singular_values: Vec<T>,
    /// `v[k]` is the right singular vector for `singular_values[k]`.
    pub v: Vec<Vec<Complex<T>>>,
}

/// One-sided Jacobi (Hestenes) SVD of an `m x k` matrix.
///
/// Columns are rotated pairwise until mutually orthogonal; the column norms are then the
/// `k` singular values (zeros included when `k > m`) and the accumulated rotation gives a
/// full set of right singular vectors, which is what the null-space computations need.
pub fn svd<T: FloatScalar>(a: &Matrix<T>) -> Svd<T> {
    let m = a.len();
    let k = a.first().map_or(0, |r| r.len());
    let prec = a
        .iter()
        .flatten()
        .map(|z| z.re.precision().max(z.im.precision()))
        .max()
        .unwrap_or(53)
        .max(24);
    let tol = T::epsilon(prec).mul_up(&T::from_f64(8.0, prec), prec);
    let mut cols: Vec<Vec<Complex<T>>> = (0..k)
        .map(|j| (0..m).map(|i| a[i][j].clone()).collect())
        .collect();
    let mut v: Vec<Vec<Complex<T>>> = (0..k)
        .map(|j| {
            (0..k)
                .map(|i| if i == j { Complex::one() } else { Complex::zero() })
                .collect()
        })
        .collect();
    let one = T::from_f64(1.0, prec);
    let two = T::from_f64(2.0, prec);
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..k {
            for q in p + 1..k {
                let alpha = cols[p].iter().fold(T::zero(), |s, z| s + norm_sqr(z));
                let beta = cols[q].iter().fold(T::zero(), |s, z| s + norm_sqr(z));
                let gamma = cols[p]
                    .iter()
                    .zip(&cols[q])
                    .fold(Complex::<T>::zero(), |s, (x, y)| s + x.conj() * y.clone());
                let g = crate::complex::abs(&gamma);
                if g.is_zero() || g <= tol.clone() * (alpha.clone() * beta.clone()).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = Complex::new(gamma.re.clone() / g.clone(), -(gamma.im.clone() / g.clone()));
                let zeta = (beta - alpha) / (two.clone() * g);
                let root = (one.clone() + zeta.clone() * zeta.clone()).sqrt();
                let t = if zeta >= T::zero() {
                    one.clone() / (zeta + root)
                } else {
                    -(one.clone() / (root - zeta))
                };
                let c = one.clone() / (one.clone() + t.clone() * t.clone()).sqrt();
                let s = c.clone() * t;
                rotate(&mut cols, p, q, &c, &s, &phase);
                rotate(&mut v, p, q, &c, &s, &phase);
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<T> = cols
        .iter()
        .map(|col| col.iter().fold(T::zero(), |s, z| s + norm_sqr(z)).sqrt())
        .collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| {
        norms[j]
            .partial_cmp(&norms[i])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(i.cmp(&j))
    });
    Svd {
        singular_values: order.iter().map(|&i| norms[i].clone()).collect(),
        v: order.iter().map(|&i| v[i].clone()).collect(),
    }
}

/// Column update `(x_p, x_q) <- (c x_p - s w x_q, s x_p + c w x_q)` with `w` a unit phase.
fn rotate<T: FloatScalar>(
    cols: &mut [Vec<Complex<T>>],
    p: usize,
    q: usize,
    c: &T,
    s: &T,
    phase: &Complex<T>,
) {
    for i in 0..cols[p].len() {
        let xp = cols[p][i].clone();
        let xq = cols[q][i].clone() * phase.clone();
        cols[p][i] = xp.clone().scale(c.clone()) - xq.clone().scale(s.clone());
        cols[q][i] = xp.scale(s.clone()) + xq.scale(c.clone());
    }
}
