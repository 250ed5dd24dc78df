use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::sign::Sign;

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Falling (`nu = +`) or rising (`nu = -`) factorial power:
/// `z(z-1)...(z-alpha+1)` or `z(z+1)...(z+alpha-1)`; `1` when `alpha = 0`.
pub fn factorial_power(z: i64, alpha: u32, nu: Sign) -> BigInt {
    let step = match nu {
        Sign::Plus => -1i64,
        Sign::Minus => 1,
    };
    (0..alpha as i64).fold(BigInt::one(), |acc, i| acc * BigInt::from(z + step * i))
}

/// `z^{nu alpha} / alpha!`, always an integer (a signed binomial coefficient).
pub fn factorial_power_over_factorial(z: i64, alpha: u32, nu: Sign) -> BigInt {
    factorial_power(z, alpha, nu) / factorial(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(factorial_power(5, 3, Sign::Plus), BigInt::from(60));
        assert_eq!(factorial_power(-4, 2, Sign::Minus), BigInt::from(12));
        for z in -5..5 {
            assert_eq!(factorial_power(z, 0, Sign::Plus), BigInt::one());
            assert_eq!(factorial_power(z, 0, Sign::Minus), BigInt::one());
        }
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert_eq!(binomial(2, 6), BigInt::zero());
        assert_eq!(factorial(5), BigInt::from(120));
    }

    proptest! {
        #[test]
        fn falling_power_vanishes_below_alpha(alpha in 0u32..12, z in 0i64..12) {
            prop_assume!(z < alpha as i64);
            prop_assert!(factorial_power(z, alpha, Sign::Plus).is_zero());
            prop_assert!(factorial_power(-z, alpha, Sign::Minus).is_zero());
        }

        #[test]
        fn division_by_factorial_is_exact(z in -20i64..20, alpha in 0u32..8) {
            for nu in [Sign::Plus, Sign::Minus] {
                let fp = factorial_power(z, alpha, nu);
                prop_assert!((&fp % factorial(alpha)).is_zero());
            }
        }
    }
}
