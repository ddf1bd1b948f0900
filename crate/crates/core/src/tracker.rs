//! Homotopy continuation in the truncation degree.
//!
//! Starting from a regular root of `Phi_d(x) = F(x, H_d(x), z)` at a small degree, each
//! segment deforms `eps` from `0` to `1/a_{d+1}` along `Phi_{d,eps}`; the endpoint is a root
//! of `Phi_{d+1}`. The loop stops once the series tail can no longer move the residual
//! above the requested tolerance.

use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certify::check_distinctness;
use crate::complex::{abs_l1, norm2, norm_inf_upper, sub_vec};
use crate::error::{Error, Result};
use crate::linalg::{lu_solve, Matrix};
use crate::poly::{lipschitz_y_bound, ComposedSystem, PolynomialMap};
use crate::scalar::FloatScalar;
use crate::series::{tail_bound, LiouvilleSequence};

/// Number of explicit terms used by the tail bound before the geometric majorant.
const TAIL_TERMS: usize = 2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrackerConfig {
    pub precision_bits: u32,
    /// Starting degree; `None` picks the smallest degree that has a usable start root.
    pub d_start: Option<usize>,
    pub d_max: usize,
    /// Target bound on the full-series residual is `2^residual_tol_log2`.
    pub residual_tol_log2: i64,
    /// Newton stopping tolerance exponent; defaults to `-(3/4) precision_bits`.
    pub newton_tol_log2: Option<i64>,
    pub max_newton_iters: usize,
    pub max_substeps_per_epsilon: usize,
    pub r_max: f64,
    pub multistart_budget: usize,
    pub rng_seed: u64,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        TrackerConfig {
            precision_bits: 256,
            d_start: None,
            d_max: 8,
            residual_tol_log2: -100,
            newton_tol_log2: None,
            max_newton_iters: 50,
            max_substeps_per_epsilon: 64,
            r_max: 10.0,
            multistart_budget: 200,
            rng_seed: 0,
        }
    }
}

impl TrackerConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(m.into()));
        if self.precision_bits < 16 {
            return bad("precision_bits must be at least 16");
        }
        if self.d_max < 1 {
            return bad("d_max must be >= 1");
        }
        if let Some(d) = self.d_start {
            if d < 1 || d > self.d_max {
                return bad("d_start must lie in 1..=d_max");
            }
        }
        if !(self.r_max > 0.0 && self.r_max.is_finite()) {
            return bad("r_max must be positive and finite");
        }
        if self.residual_tol_log2 >= 0 || self.newton_tol_log2() >= 0 {
            return bad("tolerances must be below 1");
        }
        if self.max_newton_iters == 0 || self.max_substeps_per_epsilon == 0 {
            return bad("iteration limits must be positive");
        }
        Ok(())
    }

    pub fn newton_tol_log2(&self) -> i64 {
        self.newton_tol_log2
            .unwrap_or(-(3 * i64::from(self.precision_bits) / 4))
    }

    fn pow2<T: FloatScalar>(&self, e: i64) -> Result<T> {
        T::pow2(&BigInt::from(e), self.precision_bits)
    }

    pub fn residual_tol<T: FloatScalar>(&self) -> Result<T> {
        self.pow2(self.residual_tol_log2)
    }

    pub fn newton_tol<T: FloatScalar>(&self) -> Result<T> {
        self.pow2(self.newton_tol_log2())
    }

    pub fn distinctness_tol<T: FloatScalar>(&self) -> Result<T> {
        self.pow2(-i64::from(self.precision_bits / 2))
    }
}

/// One accepted point on the path.
#[derive(Clone, Debug, PartialEq)]
pub struct PathState<T> {
    pub d: usize,
    pub eps: Complex<T>,
    pub x: Vec<Complex<T>>,
    pub newton_iters_last: usize,
    pub norm_x: T,
    pub residual: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LimitRoot<T> {
    pub a: Vec<Complex<T>>,
    pub start_d: usize,
    pub final_d: usize,
    /// Upper bound on `max_k |F_k(a, H_final_d(a), z)|`.
    pub residual_truncated: T,
    /// `lipschitz_y * tail_bound(final_d, |a|_inf + 1)`; `None` when the tail bound is not
    /// available at `final_d`.
    pub tail_term: Option<T>,
    pub lipschitz_y: Option<T>,
    pub total_residual_bound: Option<T>,
    /// Whether the stopping rule was met before `d_max`.
    pub certified: bool,
    /// `|x_{d+1} - x_d|` for each completed degree step.
    pub cauchy_history: Vec<T>,
    pub path: Vec<PathState<T>>,
}

/// A failed solve, with every state accepted before the failure.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveError<T> {
    pub error: Error,
    pub partial: Vec<PathState<T>>,
}

impl<T> std::fmt::Display for SolveError<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} ({} states accepted)", self.error, self.partial.len())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NewtonOutcome<T> {
    pub x: Vec<Complex<T>>,
    pub iters: usize,
    pub residual: T,
    /// Set when the first attempt stalled and the retry ran at doubled precision.
    pub escalated: bool,
}

fn add_vec<T: FloatScalar>(a: &[Complex<T>], b: &[Complex<T>]) -> Vec<Complex<T>> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

fn pivot_floor<T: FloatScalar>(j: &Matrix<T>, prec: u32) -> T {
    let big = j
        .iter()
        .flatten()
        .map(abs_l1)
        .fold(T::zero(), |m, v| if v > m { v } else { m });
    big.mul_pow2(&BigInt::from(-i64::from(prec / 2))).unwrap_or_else(|_| T::zero())
}

fn newton_step<T: FloatScalar>(sys: &ComposedSystem<T>, x: &[Complex<T>], r: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    let j = sys.jacobian(x)?;
    let rhs: Vec<Complex<T>> = r.iter().map(|v| -v.clone()).collect();
    lu_solve(&j, &rhs, &pivot_floor(&j, sys.precision()))
}

type NewtonFailure<T> = (Error, Option<T>);

fn newton_attempt<T: FloatScalar>(
    sys: &ComposedSystem<T>,
    x0: &[Complex<T>],
    cfg: &TrackerConfig,
) -> std::result::Result<NewtonOutcome<T>, NewtonFailure<T>> {
    let tol: T = cfg.newton_tol().map_err(|e| (e, None))?;
    let one = T::from_f64(1.0, sys.precision());
    let escape = T::from_f64(100.0 * (cfg.r_max + 1.0), sys.precision());
    let linear_zone = T::from_f64(2f64.powi(-10), sys.precision());
    let mut x = x0.to_vec();
    let mut steps: Vec<T> = Vec::new();
    for it in 0..=cfg.max_newton_iters {
        let r = sys.eval(&x).map_err(|e| (e, None))?;
        let res = norm2(&r);
        #[allow(clippy::eq_op)]
        if res != res {
            return Err((Error::NoConvergence { iters: it, residual: "nan".into() }, None));
        }
        let s = newton_step(sys, &x, &r).map_err(|e| (e, Some(res.clone())))?;
        let snorm = norm2(&s);
        let xnorm = norm2(&x);
        if res <= tol && snorm <= tol.clone() * (one.clone() + xnorm.clone()) {
            return Ok(NewtonOutcome {
                x,
                iters: it,
                residual: res,
                escalated: false,
            });
        }
        if it == cfg.max_newton_iters {
            return Err((
                Error::NoConvergence {
                    iters: it,
                    residual: res.to_decimal(6),
                },
                Some(res),
            ));
        }
        x = add_vec(&x, &s);
        steps.push(snorm.clone());
        if norm2(&x) > escape {
            return Err((
                Error::NoConvergence {
                    iters: it + 1,
                    residual: res.to_decimal(6),
                },
                None,
            ));
        }
        // Steady linear contraction of small steps is the signature of a multiple root.
        let k = steps.len();
        if k >= 4 && snorm <= linear_zone.clone() * (one.clone() + norm2(&x)) {
            let linear = (k - 3..k).all(|i| {
                let q = steps[i].clone() / steps[i - 1].clone();
                q >= T::from_f64(0.3, sys.precision()) && q <= T::from_f64(0.95, sys.precision())
            });
            if linear {
                return Err((Error::SingularJacobian, Some(res)));
            }
        }
    }
    unreachable!("loop returns on its last iteration")
}

/// Newton's method on `sys` from `x0`. A stall with residual between `newton_tol` and its
/// square root is retried once at doubled precision.
pub fn newton_correct<T: FloatScalar>(
    sys: &ComposedSystem<T>,
    x0: &[Complex<T>],
    cfg: &TrackerConfig,
) -> Result<NewtonOutcome<T>> {
    match newton_attempt(sys, x0, cfg) {
        Ok(out) => Ok(out),
        Err((err @ Error::NoConvergence { .. }, Some(res))) => {
            let tol: T = cfg.newton_tol()?;
            let prec = sys.precision();
            if res > tol && res <= tol.sqrt() && T::from_f64(1.0, 2 * prec).precision() > prec {
                let hi = sys.with_precision(2 * prec)?;
                let x_hi: Vec<Complex<T>> = x0.iter().map(|v| crate::complex::with_precision(v, 2 * prec)).collect();
                let mut out = newton_attempt(&hi, &x_hi, cfg).map_err(|(e, _)| e)?;
                out.escalated = true;
                Ok(out)
            } else {
                Err(err)
            }
        }
        Err((e, _)) => Err(e),
    }
}

fn sample_ball(rng: &mut ChaCha8Rng, n: usize, r: f64) -> Vec<(f64, f64)> {
    loop {
        let v: Vec<f64> = (0..2 * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if v.iter().map(|t| t * t).sum::<f64>() <= 1.0 {
            return v.chunks(2).map(|p| (p[0] * r, p[1] * r)).collect();
        }
    }
}

/// Distinct regular roots of `Phi_{d0}` inside the ball, ordered by norm.
pub fn find_start_roots<T: FloatScalar>(
    f: &Arc<PolynomialMap>,
    seq: &Arc<LiouvilleSequence>,
    z: &[Complex<T>],
    d0: usize,
    cfg: &TrackerConfig,
) -> Result<Vec<Vec<Complex<T>>>> {
    if d0 < 1 {
        return Err(Error::InvalidArgument("start degree must be >= 1".into()));
    }
    let prec = cfg.precision_bits;
    let zero = Complex::new(T::zero(), T::zero());
    let sys = ComposedSystem::new(f.clone(), seq.clone(), z.to_vec(), d0, zero, prec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    rng.set_stream(d0 as u64);
    let starts: Vec<Vec<Complex<T>>> = (0..cfg.multistart_budget)
        .map(|_| {
            sample_ball(&mut rng, f.n(), cfg.r_max)
                .into_iter()
                .map(|(re, im)| Complex::new(T::from_f64(re, prec), T::from_f64(im, prec)))
                .collect()
        })
        .collect();
    let found: Vec<Option<Vec<Complex<T>>>> = starts
        .par_iter()
        .map(|s| newton_correct(&sys, s, cfg).ok().map(|o| o.x))
        .collect();
    let r_max = T::from_f64(cfg.r_max, prec);
    let dtol: T = cfg.distinctness_tol()?;
    let ntol: T = cfg.newton_tol()?;
    let one = T::from_f64(1.0, prec);
    let mut roots: Vec<(T, Vec<Complex<T>>)> = Vec::new();
    for x in found.into_iter().flatten() {
        let nx = norm2(&x);
        if nx > r_max || check_distinctness(&x, &dtol).is_err() {
            continue;
        }
        let dup = roots
            .iter()
            .any(|(_, y)| norm2(&sub_vec(&x, y)) <= ntol.clone() * (one.clone() + nx.clone()));
        if !dup {
            roots.push((nx, x));
        }
    }
    if roots.is_empty() {
        return Err(Error::StartNotFound {
            attempts: cfg.multistart_budget,
        });
    }
    roots.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    Ok(roots.into_iter().map(|(_, x)| x).collect())
}

/// First root from [`find_start_roots`].
pub fn find_start_root<T: FloatScalar>(
    f: &Arc<PolynomialMap>,
    seq: &Arc<LiouvilleSequence>,
    z: &[Complex<T>],
    d0: usize,
    cfg: &TrackerConfig,
) -> Result<Vec<Complex<T>>> {
    Ok(find_start_roots(f, seq, z, d0, cfg)?.swap_remove(0))
}

/// Follow a root of `sys` (taken at its current `eps`) to `eps_target` by Euler prediction on
/// the Davidenko equation and Newton correction, halving the step on any failure.
/// Accepted substeps are appended to `states`.
pub fn track_segment<T: FloatScalar>(
    sys: &ComposedSystem<T>,
    x0: &[Complex<T>],
    eps_target: &Complex<T>,
    cfg: &TrackerConfig,
    states: &mut Vec<PathState<T>>,
) -> Result<Vec<Complex<T>>> {
    let prec = sys.precision();
    let d = sys.degree();
    if *eps_target == *sys.eps() {
        return Ok(x0.to_vec());
    }
    let eps0 = sys.eps().clone();
    let span = eps_target.clone() - eps0.clone();
    let one = T::from_f64(1.0, prec);
    let guard = T::from_f64(0.1, prec);
    let r_max = T::from_f64(cfg.r_max, prec);
    let mut s = 0.0f64;
    let mut ds = 1.0f64;
    let mut x = x0.to_vec();
    let mut cur = sys.clone();
    let mut attempts = 0;
    while s < 1.0 {
        if attempts == cfg.max_substeps_per_epsilon {
            return Err(Error::SubstepLimit {
                d,
                limit: cfg.max_substeps_per_epsilon,
            });
        }
        attempts += 1;
        let s_new = if s + ds >= 1.0 { 1.0 } else { s + ds };
        let eps_new = if s_new == 1.0 {
            eps_target.clone()
        } else {
            eps0.clone() + span.clone() * T::from_f64(s_new, prec)
        };
        let deps = eps_new.clone() - cur.eps().clone();
        let j = cur.jacobian(&x)?;
        let rhs: Vec<Complex<T>> = cur.eps_derivative(&x)?.into_iter().map(|v| -v).collect();
        let dx = lu_solve(&j, &rhs, &pivot_floor(&j, prec))?;
        let delta: Vec<Complex<T>> = dx.iter().map(|v| v.clone() * deps.clone()).collect();
        let limit = guard.clone() * (one.clone() + norm2(&x));
        if norm2(&delta) > limit {
            ds /= 2.0;
            continue;
        }
        let pred = add_vec(&x, &delta);
        let next = cur.with_eps(eps_new.clone())?;
        let out = match newton_correct(&next, &pred, cfg) {
            Ok(out) if norm2(&sub_vec(&out.x, &pred)) <= limit => out,
            _ => {
                ds /= 2.0;
                continue;
            }
        };
        let norm_x = norm2(&out.x);
        if norm_x > r_max {
            return Err(Error::PathEscapedBall { d, r_max: cfg.r_max });
        }
        states.push(PathState {
            d,
            eps: eps_new,
            x: out.x.clone(),
            newton_iters_last: out.iters,
            norm_x,
            residual: out.residual,
        });
        x = out.x;
        cur = next;
        s = s_new;
        ds *= 2.0;
    }
    Ok(x)
}

/// One degree step: `eps` from `0` to `1/a_{d+1}` on a degree-`d` system.
pub fn track_epsilon<T: FloatScalar>(
    sys: &ComposedSystem<T>,
    x0: &[Complex<T>],
    cfg: &TrackerConfig,
    states: &mut Vec<PathState<T>>,
) -> Result<Vec<Complex<T>>> {
    let target = sys
        .sequence()
        .coefficient_complex::<T>(sys.degree() + 1, sys.precision())?;
    track_segment(sys, x0, &target, cfg, states)
}

/// Upper bound on `|Phi_d(x)|_inf`: evaluation at doubled precision plus `2^-prec` for the
/// rounding that remains.
fn truncated_residual<T: FloatScalar>(sys: &ComposedSystem<T>, x: &[Complex<T>]) -> Result<T> {
    let prec = sys.precision();
    let hi = sys.with_precision(2 * prec)?;
    let x_hi: Vec<Complex<T>> = x.iter().map(|v| crate::complex::with_precision(v, 2 * prec)).collect();
    let allowance = T::from_f64(1.0, prec).mul_pow2(&BigInt::from(-i64::from(prec)))?;
    Ok(norm_inf_upper(&hi.eval(&x_hi)?, 2 * prec)
        .with_precision(prec)
        .add_up(&allowance, prec))
}

struct Bound<T> {
    tail_term: T,
    lipschitz_y: T,
}

/// Lipschitz-scaled series tail at `x`; `Ok(None)` while the tail bound is not yet available
/// at this degree.
fn tail_estimate<T: FloatScalar>(sys: &ComposedSystem<T>, x: &[Complex<T>]) -> Result<Option<Bound<T>>> {
    let prec = sys.precision();
    let one = T::from_f64(1.0, prec);
    let radius = norm_inf_upper(x, prec).add_up(&one, prec);
    let tail = match tail_bound(sys.sequence(), sys.degree(), &radius, TAIL_TERMS, prec) {
        Ok(t) => t,
        Err(Error::RatioTestFailed { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    if tail > one {
        return Ok(None);
    }
    let rho_y = norm_inf_upper(&sys.lift(x), prec).add_up(&one, prec);
    let lipschitz_y = lipschitz_y_bound(sys.map(), sys.params(), &radius, &rho_y, prec)?;
    Ok(Some(Bound {
        tail_term: lipschitz_y.mul_up(&tail, prec),
        lipschitz_y,
    }))
}

fn state_at<T: FloatScalar>(d: usize, eps: Complex<T>, out: &NewtonOutcome<T>) -> PathState<T> {
    PathState {
        d,
        eps,
        x: out.x.clone(),
        newton_iters_last: out.iters,
        norm_x: norm2(&out.x),
        residual: out.residual.clone(),
    }
}

/// Track from a given root of `Phi_{d0}` until the stopping rule holds or `d_max` is reached.
pub fn track_from<T: FloatScalar>(
    f: &Arc<PolynomialMap>,
    seq: &Arc<LiouvilleSequence>,
    z: &[Complex<T>],
    d0: usize,
    x0: &[Complex<T>],
    cfg: &TrackerConfig,
) -> std::result::Result<LimitRoot<T>, SolveError<T>> {
    let mut path = Vec::new();
    let fail = |error: Error, path: &Vec<PathState<T>>| SolveError {
        error,
        partial: path.clone(),
    };
    let prec = cfg.precision_bits;
    let zero = Complex::new(T::zero(), T::zero());
    let tol: T = cfg.residual_tol().map_err(|e| fail(e, &path))?;
    let half_tol = tol.mul_pow2(&BigInt::from(-1)).map_err(|e| fail(e, &path))?;
    let r_max = T::from_f64(cfg.r_max, prec);
    if d0 < 1 || d0 > cfg.d_max {
        return Err(fail(Error::InvalidArgument("start degree outside 1..=d_max".into()), &path));
    }
    if x0.len() != f.n() {
        return Err(fail(
            Error::DimensionMismatch {
                what: "start point",
                expected: f.n(),
                got: x0.len(),
            },
            &path,
        ));
    }
    let mut sys = ComposedSystem::new(f.clone(), seq.clone(), z.to_vec(), d0, zero.clone(), prec)
        .map_err(|e| fail(e, &path))?;
    let out = newton_correct(&sys, x0, cfg).map_err(|e| fail(e, &path))?;
    if out.escalated {
        sys = sys.with_precision(2 * prec).map_err(|e| fail(e, &path))?;
    }
    if norm2(&out.x) > r_max {
        return Err(fail(Error::PathEscapedBall { d: d0, r_max: cfg.r_max }, &path));
    }
    path.push(state_at(d0, zero.clone(), &out));
    let mut x = out.x;
    let mut cauchy_history = Vec::new();
    loop {
        let d = sys.degree();
        let bound = tail_estimate(&sys, &x).map_err(|e| fail(e, &path))?;
        let done = bound.as_ref().is_some_and(|b| b.tail_term < half_tol);
        if done || d == cfg.d_max {
            let p = sys.precision();
            let residual_truncated = truncated_residual(&sys, &x).map_err(|e| fail(e, &path))?;
            let total = bound
                .as_ref()
                .map(|b| residual_truncated.add_up(&b.tail_term, p));
            let certified = done && total.as_ref().is_some_and(|t| *t <= tol);
            return Ok(LimitRoot {
                a: x,
                start_d: d0,
                final_d: d,
                residual_truncated,
                tail_term: bound.as_ref().map(|b| b.tail_term.clone()),
                lipschitz_y: bound.map(|b| b.lipschitz_y),
                total_residual_bound: total,
                certified,
                cauchy_history,
                path,
            });
        }
        let x_end = track_epsilon(&sys, &x, cfg, &mut path).map_err(|e| fail(e, &path))?;
        let next = ComposedSystem::new(f.clone(), seq.clone(), sys.params().to_vec(), d + 1, zero.clone(), sys.precision())
            .map_err(|e| fail(e, &path))?;
        let out = newton_correct(&next, &x_end, cfg).map_err(|e| fail(e, &path))?;
        if norm2(&out.x) > r_max {
            return Err(fail(Error::PathEscapedBall { d: d + 1, r_max: cfg.r_max }, &path));
        }
        cauchy_history.push(norm2(&sub_vec(&out.x, &x)));
        path.push(state_at(d + 1, zero.clone(), &out));
        x = out.x;
        sys = if out.escalated {
            next.with_precision(2 * sys.precision()).map_err(|e| fail(e, &path))?
        } else {
            next
        };
    }
}

/// Full pipeline: start root search, degree-by-degree tracking, certified residual bound.
/// Failed paths are retried from the next start root, then from the next start degree.
pub fn solve<T: FloatScalar>(
    f: &Arc<PolynomialMap>,
    seq: &Arc<LiouvilleSequence>,
    z: &[Complex<T>],
    cfg: &TrackerConfig,
) -> std::result::Result<LimitRoot<T>, SolveError<T>> {
    let early = |error: Error| SolveError {
        error,
        partial: Vec::new(),
    };
    cfg.validate().map_err(early)?;
    if z.len() != f.r() {
        return Err(early(Error::DimensionMismatch {
            what: "parameters",
            expected: f.r(),
            got: z.len(),
        }));
    }
    if cfg.d_max + TAIL_TERMS > seq.len() {
        return Err(early(Error::SequenceExhausted {
            index: cfg.d_max + TAIL_TERMS,
            len: seq.len(),
        }));
    }
    let degrees: Vec<usize> = match cfg.d_start {
        Some(d) => vec![d],
        None => (1..=cfg.d_max).collect(),
    };
    let mut last = early(Error::StartNotFound {
        attempts: cfg.multistart_budget,
    });
    for d0 in degrees {
        let roots = match find_start_roots(f, seq, z, d0, cfg) {
            Ok(r) => r,
            Err(e) => {
                last = early(e);
                continue;
            }
        };
        for root in roots {
            match track_from(f, seq, z, d0, &root, cfg) {
                Ok(limit) => return Ok(limit),
                Err(e) => last = e,
            }
        }
    }
    Err(last)
}
