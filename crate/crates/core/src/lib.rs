//! Exact, archimedean and p-adic evaluation of q-Euler numbers, their
//! Hurwitz-type zeta and Dirichlet-type l-functions, and the p-adic q-l-function
//! together with an audit engine for its alternating power-sum expansion.
//!
//! Layers, bottom up:
//!
//! * [`kernel`]: exact rationals, binomials with negative upper index, q-integers.
//! * [`padic`]: capped absolute-precision p-adic numbers, Teichmüller lifts,
//!   logarithm / exponential and `Z_p`-exponent powers.
//! * [`qseries`]: q-Euler numbers and polynomials, alternating power sums, the
//!   distribution relation and the fermionic Riemann-sum oracle.
//! * [`zeta`]: regularized complex evaluation of the q-zeta, partial zeta and
//!   l-functions for real `0 < q < 1`.
//! * [`lfunc`]: the p-adic partial function, p-adic q-l-function, the `T` and `K`
//!   correction series and the expansion verification engine.
//!
//! The q-series layer is generic over [`Scalar`], so the same formulas run on
//! exact [`Rational`]s and on [`Real`] floats.

pub mod error;
pub mod kernel;
pub mod lfunc;
pub mod padic;
pub mod qseries;
pub mod scalar;
pub mod suites;
pub mod zeta;

pub use error::{Error, Result};
pub use kernel::QParam;
pub use padic::{PadicApprox, TeichChar, Valuation};
pub use scalar::Scalar;

/// Exact arbitrary-precision rational; the substrate of every finite identity.
pub type Rational = num_rational::BigRational;
/// Arbitrary-precision integer.
pub type Integer = num_bigint::BigInt;
/// Floating-point scalar used on the archimedean side.
pub type Real = f64;
/// Complex scalar used on the archimedean side.
pub type Complex = num_complex::Complex64;
