//! Exact coefficient rings for [`LaurentPoly`](crate::poly::LaurentPoly).
//!
//! Every invariant in this crate has integer coefficients, so [`BigInt`] is the
//! working ring. [`BigRational`] is supported so that the same machinery can be
//! reused for computations that need to divide by integer constants.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An exact commutative ring with unit usable as a polynomial coefficient.
///
/// Floating point types are deliberately not implementors: canonical forms rely
/// on exact zero tests.
pub trait Coeff:
    Clone
    + Eq
    + Hash
    + Debug
    + Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_i64(v: i64) -> Self;

    /// `self / rhs` when the quotient exists in the ring.
    fn div_exact(&self, rhs: &Self) -> Option<Self>;

    /// Whether `self` has a multiplicative inverse in the ring.
    fn is_unit(&self) -> bool;

    fn is_negative(&self) -> bool;

    fn abs_value(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Parses an unsigned decimal literal.
    fn parse_literal(digits: &str) -> Option<Self>;
}

impl Coeff for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }

    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(rhs);
        r.is_zero().then_some(q)
    }

    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn parse_literal(digits: &str) -> Option<Self> {
        BigInt::from_str(digits).ok()
    }
}

impl Coeff for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            None
        } else {
            Some(self / rhs)
        }
    }

    fn is_unit(&self) -> bool {
        !self.is_zero()
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn parse_literal(digits: &str) -> Option<Self> {
        BigInt::from_str(digits).ok().map(BigRational::from_integer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_exact_division() {
        let six = BigInt::from(6);
        assert_eq!(six.div_exact(&BigInt::from(-3)), Some(BigInt::from(-2)));
        assert_eq!(six.div_exact(&BigInt::from(4)), None);
        assert_eq!(six.div_exact(&BigInt::zero()), None);
    }

    #[test]
    fn units() {
        assert!(BigInt::from(-1).is_unit());
        assert!(!BigInt::from(2).is_unit());
        assert!(BigRational::from_i64(2).is_unit());
        assert!(!BigRational::zero().is_unit());
    }
}
