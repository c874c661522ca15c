//! Coefficient fields.
//!
//! Everything above this module is generic over [`Field`]. Two exact
//! implementations exist: [`Rational`] and the algebraic [`Scalar`](crate::Scalar).

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// An exact commutative field of characteristic zero.
pub trait Field:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_rational(q: Rational) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// Multiplicative inverse, `None` for zero (or a zero divisor when the
    /// "field" was built from a reducible modulus).
    fn try_inv(&self) -> Option<Self>;

    /// The value as a rational number, when it is one.
    fn as_rational(&self) -> Option<Rational>;

    /// Exact `n`-th root, when one exists in the field.
    fn nth_root(&self, n: u32) -> Option<Self> {
        self.as_rational()
            .and_then(|q| rational_nth_root(&q, n))
            .map(Self::from_rational)
    }
}

impl Field for Rational {
    fn from_rational(q: Rational) -> Self {
        q
    }

    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn int_nth_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_negative() {
        if k.is_multiple_of(2) {
            return None;
        }
        return int_nth_root(&-n, k).map(|r| -r);
    }
    let r = n.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

/// Exact rational `k`-th root; the real root for odd `k`, the nonnegative one for even `k`.
pub fn rational_nth_root(q: &Rational, k: u32) -> Option<Rational> {
    assert!(k > 0);
    let num = int_nth_root(q.numer(), k)?;
    let den = int_nth_root(q.denom(), k)?;
    Some(Rational::new(num, den))
}
