use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{factorial, AbelianGroup, LaurentPoly};

/// Coefficients `c_0..=c_K` of a power series in `x`, truncated at order `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigRational>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![BigRational::zero(); order + 1],
        }
    }

    /// Panics on an empty vector (a series always has order >= 0).
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least the constant term");
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Sum of two series of equal order.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order(), "series orders differ");
        Self {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    /// Cauchy product truncated to the common order.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order(), "series orders differ");
        let k = self.order();
        let coeffs = (0..=k)
            .map(|n| (0..=n).map(|i| &self.coeffs[i] * &other.coeffs[n - i]).sum())
            .collect();
        Self { coeffs }
    }
}

impl AbelianGroup for TruncatedSeries {
    // Order-0 zero; `add` widens to the larger order so mixed orders never occur in sums.
    fn zero_value() -> Self {
        Self::zero(0)
    }
    fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |s: &Self, i: usize| s.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero);
        Self {
            coeffs: (0..n).map(|i| get(self, i) + get(other, i)).collect(),
        }
    }
    fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
    fn is_zero_value(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
    fn scale(&self, c: &BigInt) -> Self {
        let c = BigRational::from_integer(c.clone());
        Self {
            coeffs: self.coeffs.iter().map(|x| x * &c).collect(),
        }
    }
}

/// Expansion of `p(e^x)` about `x = 0` up to `x^order`:
/// `c_k = sum_m coeff(A^m) * m^k / k!`.
pub fn exp_substitute(p: &LaurentPoly, order: usize) -> TruncatedSeries {
    let coeffs = (0..=order)
        .map(|k| {
            let num: BigInt = p
                .terms()
                .map(|(m, c)| c * Pow::pow(BigInt::from(m), k))
                .sum();
            BigRational::new(num, factorial(k as u32))
        })
        .collect();
    TruncatedSeries { coeffs }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

// Wire format: list of "numerator/denominator" strings.
impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coeffs.iter().map(rational_wire).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        if v.is_empty() {
            return Err(serde::de::Error::custom("empty series"));
        }
        let coeffs = v
            .iter()
            .map(|s| s.parse::<BigRational>().map_err(serde::de::Error::custom))
            .collect::<Result<_, _>>()?;
        Ok(Self { coeffs })
    }
}

/// `"n/d"` with the denominator always present.
pub fn rational_wire(c: &BigRational) -> String {
    format!("{}/{}", c.numer(), c.denom())
}
