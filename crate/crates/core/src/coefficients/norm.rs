use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A nonnegative exact rational or `+∞`.
///
/// `0 · ∞` is taken to be `0`, so that a zero coefficient never turns a
/// weighted bound infinite.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NormValue {
    Finite(BigRational),
    Infinite,
}

impl NormValue {
    /// Panics on a negative value.
    pub fn finite(value: BigRational) -> Self {
        assert!(!value.is_negative(), "norm values are nonnegative");
        NormValue::Finite(value)
    }

    pub fn zero() -> Self {
        NormValue::Finite(BigRational::zero())
    }

    pub fn one() -> Self {
        NormValue::Finite(BigRational::one())
    }

    pub fn from_integer(n: u64) -> Self {
        NormValue::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::finite(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, NormValue::Finite(_))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, NormValue::Finite(v) if v.is_zero())
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            NormValue::Finite(v) => Some(v),
            NormValue::Infinite => None,
        }
    }

    pub fn max(self, other: NormValue) -> NormValue {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn pow(&self, exp: u32) -> NormValue {
        match self {
            NormValue::Finite(v) => NormValue::Finite(num_traits::pow(v.clone(), exp as usize)),
            NormValue::Infinite if exp == 0 => NormValue::one(),
            NormValue::Infinite => NormValue::Infinite,
        }
    }
}

impl PartialOrd for NormValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for NormValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (NormValue::Finite(a), NormValue::Finite(b)) => a.cmp(b),
            (NormValue::Finite(_), NormValue::Infinite) => Ordering::Less,
            (NormValue::Infinite, NormValue::Finite(_)) => Ordering::Greater,
            (NormValue::Infinite, NormValue::Infinite) => Ordering::Equal,
        }
    }
}

impl Add for NormValue {
    type Output = NormValue;

    fn add(self, rhs: NormValue) -> NormValue {
        match (self, rhs) {
            (NormValue::Finite(a), NormValue::Finite(b)) => NormValue::Finite(a + b),
            _ => NormValue::Infinite,
        }
    }
}

impl Mul for NormValue {
    type Output = NormValue;

    fn mul(self, rhs: NormValue) -> NormValue {
        match (self, rhs) {
            (NormValue::Finite(a), NormValue::Finite(b)) => NormValue::Finite(a * b),
            (NormValue::Finite(a), NormValue::Infinite) | (NormValue::Infinite, NormValue::Finite(a))
                if a.is_zero() =>
            {
                NormValue::zero()
            }
            _ => NormValue::Infinite,
        }
    }
}

impl std::iter::Sum for NormValue {
    fn sum<I: Iterator<Item = NormValue>>(iter: I) -> NormValue {
        iter.fold(NormValue::zero(), |a, b| a + b)
    }
}

impl fmt::Display for NormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormValue::Finite(v) => write!(f, "{v}"),
            NormValue::Infinite => write!(f, "inf"),
        }
    }
}
