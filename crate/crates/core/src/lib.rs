//! Liouville-type transcendental series, polynomial systems built from their truncations,
//! certification of isolated zeros, and a homotopy tracker that follows zeros as the
//! truncation degree grows.
//!
//! The numeric core is generic over [`Scalar`]; concrete aliases for the supported
//! scalar types are exported at the crate root.

pub mod bigfloat;
pub mod certify;
pub mod complex;
pub mod error;
pub mod io;
pub mod linalg;
pub mod poly;
pub mod roots;
pub mod scalar;
pub mod series;
pub mod tracker;

pub use bigfloat::{BigFloat, Rounding, DEFAULT_PRECISION};
pub use certify::{
    augment_for_inverse, certify_regular, certify_well_balanced, degree_bounds, find_balanced_witness,
    DegreeBounds, Tolerances, Witness, ZeroCertificate,
};
pub use error::{Error, Result};
pub use poly::{ComposedSystem, Monomial, NumericMap, Polynomial, PolynomialMap, Term};
pub use scalar::{FloatScalar, Scalar};
pub use roots::min_isolated_root_norm;
pub use series::{tail_bound, GrowthAudit, LiouvilleSequence, PartialSum, SequenceKind};
pub use tracker::{solve, LimitRoot, PathState, SolveError, TrackerConfig};

pub use num_complex::Complex;
pub use num_rational::BigRational;

/// Arbitrary-precision float with an unbounded exponent.
pub type ExtendedFloat = BigFloat;
pub type ExtendedComplex = Complex<BigFloat>;
/// Exact complex numbers with rational parts.
pub type GaussianRational = Complex<BigRational>;
pub type ExactComplex = GaussianRational;
pub type F64Complex = Complex<f64>;
pub type F32Complex = Complex<f32>;
