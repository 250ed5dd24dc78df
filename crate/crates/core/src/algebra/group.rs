use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Values that the discrete calculus and linear extensions can act on:
/// exact addition, negation, a zero, and integer scaling.
pub trait AbelianGroup: Clone + PartialEq {
    fn zero_value() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero_value(&self) -> bool {
        *self == Self::zero_value()
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    /// Integer multiple, by double-and-add unless the type has a faster path.
    fn scale(&self, c: &BigInt) -> Self {
        let mut acc = Self::zero_value();
        let mut base = if c.is_negative() { self.neg() } else { self.clone() };
        let mut n = c.abs();
        let two = BigInt::from(2);
        while !n.is_zero() {
            if (&n % &two) == BigInt::from(1) {
                acc = acc.add(&base);
            }
            base = base.add(&base);
            n /= &two;
        }
        acc
    }
}

impl AbelianGroup for BigInt {
    fn zero_value() -> Self {
        Zero::zero()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero_value(&self) -> bool {
        Zero::is_zero(self)
    }
    fn scale(&self, c: &BigInt) -> Self {
        self * c
    }
}

impl AbelianGroup for BigRational {
    fn zero_value() -> Self {
        Zero::zero()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero_value(&self) -> bool {
        Zero::is_zero(self)
    }
    fn scale(&self, c: &BigInt) -> Self {
        self * BigRational::from_integer(c.clone())
    }
}

impl AbelianGroup for i64 {
    fn zero_value() -> Self {
        0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
}
