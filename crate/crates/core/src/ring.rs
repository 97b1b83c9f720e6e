//! Coefficient rings.
//!
//! Polynomial arithmetic in [`crate::poly`] is generic over these traits so the
//! same code runs over `BigInt`, `BigRational`, nested polynomials (for
//! discriminants taken in a parameter `t`), and the float types used for
//! numerical cross-checks.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A commutative ring with identity.
pub trait Ring:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Image of an integer under the canonical map `Z -> R`.
    fn from_int(n: i64) -> Self;

    fn pow_u64(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base.clone();
            }
            exp >>= 1;
            if exp > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

/// An integral domain with exact division.
pub trait Domain: Ring {
    /// Returns `q` with `q * rhs == self`, or `None` when `rhs` does not divide `self`.
    fn div_exact(&self, rhs: &Self) -> Option<Self>;
}

/// A field.
pub trait Field: Domain {
    fn inv(&self) -> Option<Self>;
}

impl Ring for BigInt {
    fn from_int(n: i64) -> Self {
        BigInt::from(n)
    }
}

impl Domain for BigInt {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(rhs);
        r.is_zero().then_some(q)
    }
}

impl Ring for BigRational {
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

impl Domain for BigRational {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        (!rhs.is_zero()).then(|| self / rhs)
    }
}

impl Field for BigRational {
    fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
}

macro_rules! impl_float_ring {
    ($f:ty) => {
        impl Ring for $f {
            fn from_int(n: i64) -> Self {
                n as $f
            }
        }

        impl Domain for $f {
            fn div_exact(&self, rhs: &Self) -> Option<Self> {
                (*rhs != 0.0).then(|| self / rhs)
            }
        }

        impl Field for $f {
            fn inv(&self) -> Option<Self> {
                (*self != 0.0).then(|| 1.0 / self)
            }
        }
    };
}

impl_float_ring!(f32);
impl_float_ring!(f64);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow_matches_repeated_product() {
        let x = BigInt::from(-3);
        assert_eq!(x.pow_u64(0), BigInt::one());
        assert_eq!(x.pow_u64(5), BigInt::from(-243));
        assert_eq!(2.0f64.pow_u64(10), 1024.0);
    }

    #[test]
    fn exact_division() {
        let a = BigInt::from(12);
        assert_eq!(a.div_exact(&BigInt::from(4)), Some(BigInt::from(3)));
        assert_eq!(a.div_exact(&BigInt::from(5)), None);
        assert_eq!(a.div_exact(&BigInt::zero()), None);
    }
}
