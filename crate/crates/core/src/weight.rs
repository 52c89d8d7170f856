//! Scalar weights used by truth tables and the enumeration engine.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};
use std::fmt::Debug;
use std::ops::{Add, Mul};

/// A non-negative scalar that can weight assignments.
///
/// Addition and multiplication must be associative and commutative on the
/// values that occur, so that any summation order yields the same result.
pub trait Weight:
    Clone + Debug + PartialEq + PartialOrd + Zero + One + Add<Output = Self> + Mul<Output = Self> + Send + Sync + 'static
{
    /// Exact rational value (floats convert through their binary expansion).
    fn to_rational(&self) -> BigRational;

    /// Converts from an exact rational, if representable.
    fn from_rational(r: &BigRational) -> Option<Self>;

    /// True when the value is exactly 0 or 1.
    fn is_bit(&self) -> bool {
        self.is_zero() || self.is_one_value()
    }

    fn is_one_value(&self) -> bool {
        *self == Self::one()
    }
}

fn integral(r: &BigRational) -> Option<&BigInt> {
    if r.is_integer() {
        Some(r.numer())
    } else {
        None
    }
}

impl Weight for u64 {
    fn to_rational(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(*self))
    }
    fn from_rational(r: &BigRational) -> Option<Self> {
        integral(r)?.to_u64()
    }
}

impl Weight for u128 {
    fn to_rational(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(*self))
    }
    fn from_rational(r: &BigRational) -> Option<Self> {
        integral(r)?.to_u128()
    }
}

impl Weight for BigUint {
    fn to_rational(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.clone()))
    }
    fn from_rational(r: &BigRational) -> Option<Self> {
        integral(r)?.to_biguint()
    }
}

impl Weight for BigRational {
    fn to_rational(&self) -> BigRational {
        self.clone()
    }
    fn from_rational(r: &BigRational) -> Option<Self> {
        if r < &BigRational::zero() {
            None
        } else {
            Some(r.clone())
        }
    }
}

impl Weight for f64 {
    fn to_rational(&self) -> BigRational {
        BigRational::from_f64(*self).unwrap_or_else(BigRational::zero)
    }
    fn from_rational(r: &BigRational) -> Option<Self> {
        r.to_f64().filter(|x| *x >= 0.0)
    }
}

impl Weight for f32 {
    fn to_rational(&self) -> BigRational {
        BigRational::from_f32(*self).unwrap_or_else(BigRational::zero)
    }
    fn from_rational(r: &BigRational) -> Option<Self> {
        r.to_f32().filter(|x| *x >= 0.0)
    }
}
