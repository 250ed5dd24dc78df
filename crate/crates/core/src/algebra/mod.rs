//! Exact arithmetic: Laurent polynomials in `A`, rational polynomials,
//! truncated exponential series, Lagrange interpolation and factorial powers.
//!
//! Everything here is arbitrary precision. There is no floating point.

mod combinatorics;
mod group;
mod laurent;
mod rational_poly;
mod series;

pub use combinatorics::{binomial, factorial, factorial_power, factorial_power_over_factorial};
pub use group::AbelianGroup;
pub use laurent::LaurentPoly;
pub use rational_poly::{lagrange_interpolate, RationalPoly};
pub use series::{exp_substitute, rational_wire, TruncatedSeries};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("duplicate abscissa {0} in interpolation data")]
    DuplicateAbscissa(i64),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("inexact division: nonzero remainder {remainder}")]
    InexactDivision { remainder: String },
}

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `n / d` as an exact rational. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
