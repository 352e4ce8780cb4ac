//! Coefficient scalars for exact polynomial arithmetic.
//!
//! The polynomial ring is generic over the scalar type through
//! [`ExactScalar`]: arbitrary-precision integers for `Z[...]` work and
//! reduced rationals for `Q[...]` work. Both are exact; no rounding ever
//! occurs. Concrete polynomial aliases live at the crate root.

use crate::poly::MPoly;
use crate::var::Var;
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

/// An exact coefficient domain: a GCD domain with sign, embedding of small
/// integers, and a decimal text form (`"123"` or `"-4/5"`).
pub trait ExactScalar:
    Clone
    + PartialEq
    + Eq
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
{
    /// Greatest common divisor, normalized nonnegative. `gcd(0, 0) = 0`.
    fn gcd(a: &Self, b: &Self) -> Self;

    /// Exact quotient `a / b`, or `None` when `b` does not divide `a`
    /// (or `b` is zero).
    fn exact_div(a: &Self, b: &Self) -> Option<Self>;

    fn is_negative(&self) -> bool;

    fn from_i64(v: i64) -> Self;

    /// Decimal integer or fraction string, as used in the JSON
    /// polynomial format.
    fn to_decimal_string(&self) -> String;

    fn from_decimal_str(s: &str) -> Option<Self>;

    /// Probe for a certified-trivial gcd of `f` and `g` in `v`. `false`
    /// means "not certified here", never "nontrivial". Domains without a
    /// cheap certificate keep the default.
    fn coprime_probe(_f: &MPoly<Self>, _g: &MPoly<Self>, _v: Var) -> bool {
        false
    }

    /// Fast dedicated gcd for primitive univariate polynomials in `v`,
    /// when the domain has one (e.g. modular images over the integers).
    fn univariate_gcd(_a: &MPoly<Self>, _b: &MPoly<Self>, _v: Var) -> Option<MPoly<Self>> {
        None
    }
}

impl ExactScalar for BigInt {
    fn gcd(a: &Self, b: &Self) -> Self {
        Integer::gcd(a, b)
    }

    fn exact_div(a: &Self, b: &Self) -> Option<Self> {
        if b.is_zero() {
            return None;
        }
        let (q, r) = a.div_rem(b);
        r.is_zero().then_some(q)
    }

    fn is_negative(&self) -> bool {
        self.sign() == Sign::Minus
    }

    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }

    fn to_decimal_string(&self) -> String {
        self.to_string()
    }

    fn from_decimal_str(s: &str) -> Option<Self> {
        s.parse().ok()
    }

    fn coprime_probe(f: &MPoly<Self>, g: &MPoly<Self>, v: Var) -> bool {
        crate::modgcd::certainly_coprime_in(f, g, v)
    }

    fn univariate_gcd(a: &MPoly<Self>, b: &MPoly<Self>, v: Var) -> Option<MPoly<Self>> {
        let dense = |f: &MPoly<Self>| -> Vec<BigInt> {
            let mut out = vec![BigInt::zero(); f.deg(v) + 1];
            for (ex, c) in f.terms() {
                out[ex[v.index()] as usize] = c.clone();
            }
            out
        };
        let g = crate::modgcd::gcd_univariate(&dense(a), &dense(b)).ok()?;
        Some(MPoly::from_terms(g.into_iter().enumerate().map(|(i, c)| {
            let mut ex = [0u16; crate::var::NVARS];
            ex[v.index()] = i as u16;
            (ex, c)
        })))
    }
}

impl ExactScalar for BigRational {
    /// `gcd(a/b, c/d) = gcd(a, c) / lcm(b, d)`: the largest rational that
    /// divides both with integer quotients. Keeps contents meaningful over Q.
    fn gcd(a: &Self, b: &Self) -> Self {
        if a.is_zero() {
            return b.abs();
        }
        if b.is_zero() {
            return a.abs();
        }
        let num = Integer::gcd(a.numer(), b.numer());
        let den = a.denom().lcm(b.denom());
        BigRational::new(num, den)
    }

    fn exact_div(a: &Self, b: &Self) -> Option<Self> {
        if b.is_zero() {
            return None;
        }
        Some(a / b)
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn to_decimal_string(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }

    fn from_decimal_str(s: &str) -> Option<Self> {
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.parse().ok()?;
                let d: BigInt = d.parse().ok()?;
                if d.is_zero() {
                    return None;
                }
                Some(BigRational::new(n, d))
            }
            None => Some(BigRational::from_integer(s.parse().ok()?)),
        }
    }
}
