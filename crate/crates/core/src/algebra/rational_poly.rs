use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::AlgebraError;

/// Dense univariate polynomial with rational coefficients; index = power.
///
/// Trailing zeros are trimmed, so the zero polynomial has no coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, z: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * z + c)
    }

    pub fn eval_int(&self, z: i64) -> BigRational {
        self.eval(&BigRational::from_integer(BigInt::from(z)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// `p(z + s)`.
    pub fn shifted(&self, s: i64) -> Self {
        let lin = Self::new(vec![BigRational::from_integer(s.into()), BigRational::one()]);
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| {
            acc.mul(&lin).add(&Self::constant(c.clone()))
        })
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*z")?,
                _ => write!(f, "({c})*z^{i}")?,
            }
        }
        Ok(())
    }
}

/// The unique polynomial of degree `< points.len()` through all points.
pub fn lagrange_interpolate(points: &[(i64, BigRational)]) -> Result<RationalPoly, AlgebraError> {
    for (i, (x, _)) in points.iter().enumerate() {
        if points[..i].iter().any(|(y, _)| y == x) {
            return Err(AlgebraError::DuplicateAbscissa(*x));
        }
    }
    let mut acc = RationalPoly::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut basis = RationalPoly::constant(yi.clone());
        let mut denom = BigInt::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            basis = basis.mul(&RationalPoly::new(vec![
                BigRational::from_integer(BigInt::from(-*xj)),
                BigRational::one(),
            ]));
            denom *= BigInt::from(xi - xj);
        }
        acc = acc.add(&basis.scale(&BigRational::new(BigInt::one(), denom)));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use proptest::prelude::*;

    #[test]
    fn squares() {
        let p = lagrange_interpolate(&[(0, rat(0)), (1, rat(1)), (2, rat(4))]).unwrap();
        assert_eq!(p, RationalPoly::new(vec![rat(0), rat(0), rat(1)]));
    }

    #[test]
    fn symmetric_constant() {
        let p = lagrange_interpolate(&[(-1, rat(7)), (1, rat(7))]).unwrap();
        assert_eq!(p, RationalPoly::constant(rat(7)));
        assert_eq!(p.degree(), Some(0));
    }

    #[test]
    fn figure_eight_even_data() {
        // Hand solution of the 3x3 system through (0,0), (2,-24), (4,-96).
        let p = lagrange_interpolate(&[(0, rat(0)), (2, rat(-24)), (4, rat(-96))]).unwrap();
        assert_eq!(p, RationalPoly::new(vec![rat(0), rat(0), rat(-6)]));
    }

    #[test]
    fn duplicate_abscissa() {
        let r = lagrange_interpolate(&[(1, rat(0)), (1, rat(2))]);
        assert_eq!(r, Err(AlgebraError::DuplicateAbscissa(1)));
    }

    #[test]
    fn shift() {
        let p = RationalPoly::new(vec![rat(1), rat(0), rat(1)]);
        assert_eq!(p.shifted(2), RationalPoly::new(vec![rat(5), rat(4), rat(1)]));
    }

    proptest! {
        #[test]
        fn interpolant_reproduces_points(ys in prop::collection::vec(-50i64..50, 1..7), start in -5i64..5) {
            let pts: Vec<_> = ys.iter().enumerate().map(|(i, y)| (start + 2 * i as i64, rat(*y))).collect();
            let p = lagrange_interpolate(&pts).unwrap();
            prop_assert!(p.degree().is_none_or(|d| d < pts.len()));
            for (x, y) in &pts {
                prop_assert_eq!(&p.eval_int(*x), y);
            }
        }
    }
}
