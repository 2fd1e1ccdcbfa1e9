use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact field arithmetic used by every algorithm in the crate.
///
/// Zero tests must be exact, so floating point types deliberately do not
/// implement this trait.
pub trait Field:
    Clone
    + Eq
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn from_int(n: i64) -> Self;

    fn from_rational(q: &BigRational) -> Self;

    fn mul_ref(&self, other: &Self) -> Self {
        let mut r = self.clone();
        r *= other;
        r
    }

    fn add_ref(&self, other: &Self) -> Self {
        let mut r = self.clone();
        r += other;
        r
    }

    fn sub_ref(&self, other: &Self) -> Self {
        let mut r = self.clone();
        r -= other;
        r
    }

    /// `self += a * b`
    fn add_mul(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let p = a.mul_ref(b);
        *self += &p;
    }

    fn div_ref(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul_ref(&i))
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= &base;
            }
            e >>= 1;
            if e > 0 {
                let b2 = base.mul_ref(&base);
                base = b2;
            }
        }
        acc
    }
}

/// A field containing a chosen primitive root of unity `zeta` of order
/// `conductor()`.
pub trait CyclotomicField: Field + FromStr<Err = crate::Error> {
    fn conductor() -> usize;

    /// `zeta^k`; negative exponents are allowed.
    fn zeta_pow(k: i64) -> Self;

    /// Elements with this many coordinates over the rationals.
    fn degree() -> usize;

    fn coordinates(&self) -> Vec<BigRational>;
}

impl Field for BigRational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
}

/// Formats a rational the way the text format expects: `3`, `-1/2`.
pub fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let q = if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).ok()?;
        let d = BigInt::from_str(d.trim()).ok()?;
        if d.is_zero() {
            return None;
        }
        BigRational::new(n, d)
    } else {
        BigRational::from_integer(BigInt::from_str(s).ok()?)
    };
    Some(q)
}

pub(crate) fn is_negative(q: &BigRational) -> bool {
    q.is_negative()
}
