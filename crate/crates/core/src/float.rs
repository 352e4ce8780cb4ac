//! Extended-precision binary floating point.
//!
//! [`ExtFloat`] is a thin wrapper over a correctly-rounded arbitrary
//! precision significand/exponent representation. Every value carries its
//! precision in bits; each arithmetic operation is correctly rounded
//! (round-to-nearest-even) at the result precision, and mixed-precision
//! operations round to the smaller of the two operand precisions.

use crate::error::{Error, Result};
use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign, WORD_BIT_SIZE};
use num_bigint::{BigInt, Sign as IntSign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

const RM: RoundingMode = RoundingMode::ToEven;

/// Default working precision in bits (~77 decimal digits).
pub const DEFAULT_PRECISION: usize = 256;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

#[derive(Clone, Debug)]
pub struct ExtFloat {
    repr: BigFloat,
    prec: usize,
}

impl ExtFloat {
    pub fn zero(prec: usize) -> Self {
        ExtFloat {
            repr: BigFloat::from_i8(0, prec),
            prec,
        }
    }

    pub fn one(prec: usize) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: usize) -> Self {
        ExtFloat {
            repr: BigFloat::from_i64(v, prec),
            prec,
        }
    }

    /// Exact embedding of a big integer, then a single correct rounding to
    /// `prec` bits.
    pub fn from_bigint(n: &BigInt, prec: usize) -> Self {
        if n.is_zero() {
            return Self::zero(prec);
        }
        let (sign, mag) = (n.sign(), n.magnitude());
        let words: Vec<u64> = mag.to_u64_digits();
        let e = (words.len() * WORD_BIT_SIZE) as i64;
        debug_assert!(e <= astro_float::EXPONENT_MAX as i64);
        let mut repr = BigFloat::from_words(
            &words,
            if sign == IntSign::Minus {
                Sign::Neg
            } else {
                Sign::Pos
            },
            e as astro_float::Exponent,
        );
        repr.set_precision(prec, RM).expect("precision change");
        ExtFloat { repr, prec }
    }

    /// Correctly rounded value of an exact rational.
    pub fn from_rational(q: &BigRational, prec: usize) -> Self {
        let num = Self::from_bigint(q.numer(), q.numer().bits().max(prec as u64) as usize + 64);
        let den = Self::from_bigint(q.denom(), q.denom().bits().max(prec as u64) as usize + 64);
        ExtFloat {
            repr: num.repr.div(&den.repr, prec, RM),
            prec,
        }
    }

    /// Parse a decimal string at the given precision.
    pub fn parse_decimal(s: &str, prec: usize) -> Result<Self> {
        let repr = CONSTS.with(|cc| {
            BigFloat::parse(s, Radix::Dec, prec, RM, &mut cc.borrow_mut())
        });
        if repr.is_nan() {
            return Err(Error::Structural(format!("cannot parse `{s}` as a decimal number")));
        }
        Ok(ExtFloat { repr, prec })
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.repr.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.repr.is_negative() && !self.repr.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.repr.is_positive() && !self.repr.is_zero()
    }

    /// Sign as -1, 0, +1.
    pub fn signum(&self) -> i32 {
        if self.is_zero() {
            0
        } else if self.is_negative() {
            -1
        } else {
            1
        }
    }

    /// Binary exponent e with 2^(e-1) <= |x| < 2^e; 0 for zero.
    pub fn exponent(&self) -> i64 {
        self.repr.exponent().unwrap_or(0) as i64
    }

    /// |self| < 2^e (exactly; true for zero whenever any magnitude is).
    pub fn magnitude_below_pow2(&self, e: i64) -> bool {
        self.is_zero() || self.exponent() <= e
    }

    /// The value 2^e at the given precision.
    pub fn pow2(e: i64, prec: usize) -> Self {
        let mut repr = BigFloat::from_i8(1, prec);
        repr.set_exponent((e + 1) as astro_float::Exponent); // 1 has exponent 1
        ExtFloat { repr, prec }
    }

    pub fn abs(&self) -> Self {
        ExtFloat {
            repr: self.repr.abs(),
            prec: self.prec,
        }
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.is_negative() {
            return Err(Error::Domain("square root of a negative value".into()));
        }
        Ok(ExtFloat {
            repr: self.repr.sqrt(self.prec, RM),
            prec: self.prec,
        })
    }

    pub fn powi(&self, n: usize) -> Self {
        ExtFloat {
            repr: self.repr.powi(n, self.prec, RM),
            prec: self.prec,
        }
    }

    pub fn mul_i64(&self, v: i64) -> Self {
        self * &ExtFloat::from_i64(v, self.prec)
    }

    /// Re-round to a (typically smaller) precision.
    pub fn with_precision(&self, prec: usize) -> Self {
        let mut repr = self.repr.clone();
        repr.set_precision(prec, RM).expect("precision change");
        ExtFloat { repr, prec }
    }

    /// Exact rational value of this float.
    pub fn to_rational(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        let (words, p, sign, e, _) = self.repr.as_raw_parts().expect("finite value");
        let mut bytes = Vec::with_capacity(words.len() * 8);
        for w in words {
            bytes.extend_from_slice(&w.to_le_bytes());
        }
        let mut m = BigInt::from(num_bigint::BigUint::from_bytes_le(&bytes));
        if sign == Sign::Neg {
            m = -m;
        }
        let shift = e as i64 - p as i64;
        if shift >= 0 {
            BigRational::from_integer(m << shift)
        } else {
            BigRational::new(m, BigInt::one() << (-shift) as usize)
        }
    }

    /// Decimal string with `digits` significant digits (display rounding
    /// half-away-from-zero on the digit string).
    pub fn to_decimal_string(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let full = CONSTS.with(|cc| {
            self.repr
                .format(Radix::Dec, RM, &mut cc.borrow_mut())
                .expect("decimal formatting")
        });
        trim_significant(&full, digits)
    }

    /// Full-precision decimal string.
    pub fn to_decimal_full(&self) -> String {
        self.to_decimal_string(self.prec * 2)
    }

    fn bin(a: &Self, b: &Self, f: impl Fn(&BigFloat, &BigFloat, usize, RoundingMode) -> BigFloat) -> Self {
        let prec = a.prec.min(b.prec);
        let repr = f(&a.repr, &b.repr, prec, RM);
        debug_assert!(!repr.is_nan(), "extended float operation produced NaN");
        ExtFloat { repr, prec }
    }
}

/// Trim a decimal scientific string ("-d.ddd...e±x") to `digits`
/// significant digits, rounding half away from zero on the digit string.
fn trim_significant(s: &str, digits: usize) -> String {
    let digits = digits.max(1);
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().unwrap_or(0)),
        None => (s, 0),
    };
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", mantissa),
    };
    let all: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let mut exp = exp;
    let mut kept: Vec<u8> = all.bytes().take(digits).collect();
    if all.len() > digits {
        let next = all.as_bytes()[digits];
        if next >= b'5' {
            // carry
            let mut i = kept.len();
            loop {
                if i == 0 {
                    kept.insert(0, b'1');
                    exp += 1;
                    kept.truncate(digits);
                    break;
                }
                i -= 1;
                if kept[i] == b'9' {
                    kept[i] = b'0';
                } else {
                    kept[i] += 1;
                    break;
                }
            }
        }
    }
    while kept.len() > 1 && kept.last() == Some(&b'0') {
        kept.pop();
    }
    let head = kept[0] as char;
    let tail: String = kept[1..].iter().map(|&b| b as char).collect();
    if tail.is_empty() {
        format!("{sign}{head}e{exp:+}")
    } else {
        format!("{sign}{head}.{tail}e{exp:+}")
    }
}

impl Add for &ExtFloat {
    type Output = ExtFloat;
    fn add(self, rhs: Self) -> ExtFloat {
        ExtFloat::bin(self, rhs, |a, b, p, rm| a.add(b, p, rm))
    }
}

impl Sub for &ExtFloat {
    type Output = ExtFloat;
    fn sub(self, rhs: Self) -> ExtFloat {
        ExtFloat::bin(self, rhs, |a, b, p, rm| a.sub(b, p, rm))
    }
}

impl Mul for &ExtFloat {
    type Output = ExtFloat;
    fn mul(self, rhs: Self) -> ExtFloat {
        ExtFloat::bin(self, rhs, |a, b, p, rm| a.mul(b, p, rm))
    }
}

impl Div for &ExtFloat {
    type Output = ExtFloat;
    fn div(self, rhs: Self) -> ExtFloat {
        assert!(!rhs.is_zero(), "extended float division by zero");
        ExtFloat::bin(self, rhs, |a, b, p, rm| a.div(b, p, rm))
    }
}

impl Neg for &ExtFloat {
    type Output = ExtFloat;
    fn neg(self) -> ExtFloat {
        ExtFloat {
            repr: self.repr.clone().neg(),
            prec: self.prec,
        }
    }
}

macro_rules! owned_float_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for ExtFloat {
            type Output = ExtFloat;
            fn $method(self, rhs: Self) -> ExtFloat {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&ExtFloat> for ExtFloat {
            type Output = ExtFloat;
            fn $method(self, rhs: &ExtFloat) -> ExtFloat {
                (&self).$method(rhs)
            }
        }
    };
}
owned_float_binop!(Add, add);
owned_float_binop!(Sub, sub);
owned_float_binop!(Mul, mul);
owned_float_binop!(Div, div);

impl Neg for ExtFloat {
    type Output = ExtFloat;
    fn neg(self) -> ExtFloat {
        -(&self)
    }
}

impl PartialEq for ExtFloat {
    fn eq(&self, other: &Self) -> bool {
        self.repr.cmp(&other.repr) == Some(0)
    }
}

impl PartialOrd for ExtFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.repr.cmp(&other.repr).map(|s| s.cmp(&0))
    }
}

impl fmt::Display for ExtFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string(40))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_two_to_eighty_digits() {
        let two = ExtFloat::from_i64(2, 320);
        let s = two.sqrt().unwrap();
        let expect = ExtFloat::parse_decimal(
            "1.414213562373095048801688724209698078569671875376948073176679737990732478462107039",
            320,
        )
        .unwrap();
        let diff = (&s - &expect).abs();
        assert!(diff.magnitude_below_pow2(-260), "diff = {diff}");
        // 1 - 1/sqrt(2)
        let one = ExtFloat::one(320);
        let v = &one - &(&one / &s);
        let expect = ExtFloat::parse_decimal(
            "0.2928932188134524755991556378951509607151640623115259634116601310046337607689464806",
            320,
        )
        .unwrap();
        assert!((&v - &expect).abs().magnitude_below_pow2(-260));
    }

    #[test]
    fn sqrt_of_negative_is_domain_error() {
        let m = ExtFloat::from_i64(-1, 128);
        assert!(matches!(m.sqrt(), Err(Error::Domain(_))));
    }

    #[test]
    fn mixed_precision_takes_smaller() {
        let a = ExtFloat::from_i64(1, 256);
        let b = ExtFloat::from_i64(3, 128);
        let q = &a / &b;
        assert_eq!(q.precision(), 128);
    }

    #[test]
    fn bigint_embedding_is_exact() {
        let n: BigInt = BigInt::from(3).pow(100) - BigInt::from(7);
        let f = ExtFloat::from_bigint(&n, 512);
        assert_eq!(f.to_rational(), BigRational::from_integer(n));
    }

    #[test]
    fn rational_round_trip_within_half_ulp() {
        let q = BigRational::new(BigInt::from(22), BigInt::from(7));
        let f = ExtFloat::from_rational(&q, 256);
        let back = f.to_rational();
        let err = (&back - &q).abs();
        // |err| <= 2^-254 roughly (half ulp of a value near 2^2)
        let bound = BigRational::new(BigInt::one(), BigInt::one() << 252);
        assert!(err < bound);
    }

    #[test]
    fn pow2_and_exponent() {
        let x = ExtFloat::pow2(-100, 128);
        assert_eq!(x.exponent(), -99); // 2^(e-1) <= x < 2^e with x = 2^-100
        assert!(x.magnitude_below_pow2(-99));
        assert!(!x.magnitude_below_pow2(-101));
        let r = x.to_rational();
        assert_eq!(r, BigRational::new(BigInt::one(), BigInt::one() << 100));
    }

    #[test]
    fn ordering() {
        let a = ExtFloat::from_i64(-3, 128);
        let b = ExtFloat::from_i64(2, 128);
        assert!(a < b);
        assert!(a.is_negative() && b.is_positive());
        assert_eq!(ExtFloat::zero(128).signum(), 0);
    }

    #[test]
    fn decimal_strings_round_trip() {
        let x = ExtFloat::parse_decimal("0.1485318981901843551170116147975196805", 256).unwrap();
        let s = x.to_decimal_full();
        let y = ExtFloat::parse_decimal(&s, 256).unwrap();
        assert!((&x - &y).abs().magnitude_below_pow2(-250));
    }
}

#[cfg(test)]
mod trim_tests {
    use super::*;

    #[test]
    fn significant_digit_trimming() {
        let x = ExtFloat::parse_decimal("1.2", 300).unwrap();
        assert_eq!(x.to_decimal_string(6), "1.2e+0");
        let x = ExtFloat::parse_decimal("-0.0123456789", 256).unwrap();
        assert_eq!(x.to_decimal_string(4), "-1.235e-2");
        let x = ExtFloat::from_i64(2, 128);
        assert_eq!(x.to_decimal_string(8), "2e+0");
        // carry propagation: 9.99951 at 4 digits -> 1e+1... at 3 digits
        let x = ExtFloat::parse_decimal("9.9995", 128).unwrap();
        assert_eq!(x.to_decimal_string(3), "1e+1");
        assert_eq!(ExtFloat::zero(64).to_decimal_string(5), "0");
    }

    #[test]
    fn round_trip_through_trimmed_string() {
        let x = ExtFloat::parse_decimal("0.14853189819018435511701161479751968051", 256).unwrap();
        let s = x.to_decimal_string(30);
        let y = ExtFloat::parse_decimal(&s, 256).unwrap();
        assert!((&x - &y).abs().magnitude_below_pow2(-95));
    }
}
