//! Integer arithmetic with overflow detection.
//!
//! Every algorithm in this module tree is generic over [`Int`]. Callers run it
//! with `i64` first and, if any operation overflows, rerun the same code with
//! `BigInt`. The two runs are the same algorithm, so the outputs agree.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub trait Int: Clone + Eq + Ord + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn to_bigint(&self) -> BigInt;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn checked_add(&self, o: &Self) -> Option<Self>;
    fn checked_sub(&self, o: &Self) -> Option<Self>;
    fn checked_mul(&self, o: &Self) -> Option<Self>;
    fn checked_neg(&self) -> Option<Self>;
    /// Floor division; `o` must be nonzero.
    fn checked_div_floor(&self, o: &Self) -> Option<Self>;
    /// Exact division; `o` must divide `self`.
    fn checked_div_exact(&self, o: &Self) -> Option<Self>;
    /// Nonnegative gcd.
    fn checked_gcd(&self, o: &Self) -> Option<Self>;

    fn checked_abs(&self) -> Option<Self> {
        if self.is_negative() {
            self.checked_neg()
        } else {
            Some(self.clone())
        }
    }

    fn is_unit(&self) -> bool {
        *self == Self::one() || self.checked_neg().is_some_and(|n| n == Self::one())
    }

    /// `self - q * o`.
    fn checked_sub_mul(&self, q: &Self, o: &Self) -> Option<Self> {
        self.checked_sub(&q.checked_mul(o)?)
    }
}

impl Int for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_i64(v: i64) -> Self {
        v
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn checked_add(&self, o: &Self) -> Option<Self> {
        i64::checked_add(*self, *o)
    }
    fn checked_sub(&self, o: &Self) -> Option<Self> {
        i64::checked_sub(*self, *o)
    }
    fn checked_mul(&self, o: &Self) -> Option<Self> {
        i64::checked_mul(*self, *o)
    }
    fn checked_neg(&self) -> Option<Self> {
        i64::checked_neg(*self)
    }
    fn checked_div_floor(&self, o: &Self) -> Option<Self> {
        let q = self.checked_div(*o)?;
        if (self % o != 0) && ((*self < 0) != (*o < 0)) {
            q.checked_sub(1)
        } else {
            Some(q)
        }
    }
    fn checked_div_exact(&self, o: &Self) -> Option<Self> {
        self.checked_div(*o)
    }
    fn checked_gcd(&self, o: &Self) -> Option<Self> {
        let g = Integer::gcd(&self.unsigned_abs(), &o.unsigned_abs());
        i64::try_from(g).ok()
    }
}

impl Int for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn checked_add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn checked_sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn checked_mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn checked_neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn checked_div_floor(&self, o: &Self) -> Option<Self> {
        Some(Integer::div_floor(self, o))
    }
    fn checked_div_exact(&self, o: &Self) -> Option<Self> {
        Some(self / o)
    }
    fn checked_gcd(&self, o: &Self) -> Option<Self> {
        Some(Integer::gcd(self, o))
    }
}

/// Converts a big integer back to `i64` if it fits.
pub fn big_to_i64(v: &BigInt) -> Option<i64> {
    v.to_i64()
}

/// `gcd` of every entry, zero for an all-zero slice.
pub(crate) fn content<'a, T: Int>(xs: impl IntoIterator<Item = &'a T>) -> Option<T> {
    let mut g = T::zero();
    for x in xs {
        if !x.is_zero() {
            g = g.checked_gcd(x)?;
            if g.is_unit() {
                break;
            }
        }
    }
    Some(g)
}
