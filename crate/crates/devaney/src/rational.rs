//! Exact arbitrary-precision rational numbers.
//!
//! Every quantity in this crate (breakpoints, orbit points, interval
//! endpoints, witnesses) is a [`Rational`]. Arithmetic never rounds; values
//! are kept in lowest terms with a positive denominator. The text form is
//! `p/q` or `p` with an optional leading `-` and no whitespace; it is shared
//! by the map file format and by reports.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

/// An exact rational number, always in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal {0:?}: expected `p` or `p/q` with decimal digits")]
    Malformed(String),
    #[error("zero denominator in rational literal {0:?}")]
    ZeroDenominator(String),
}

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den` reduced. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "rational with zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }

    pub fn from_parts(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "rational with zero denominator");
        Rational(BigRational::new(num, den))
    }

    /// `1 / 2^k`.
    pub fn pow2_inv(k: u32) -> Self {
        Rational(BigRational::new(BigInt::one(), BigInt::one() << k))
    }

    /// `n / 2^k`.
    pub fn dyadic(n: i64, k: u32) -> Self {
        Rational(BigRational::new(BigInt::from(n), BigInt::one() << k))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rational(self.0.recip())
    }

    /// Largest integer `n` with `n <= self`.
    pub fn floor_int(&self) -> BigInt {
        self.0.numer().div_floor(self.0.denom())
    }

    /// Index of the dyadic cell of width `2^-k` containing `self`:
    /// `floor(self * 2^k)`.
    pub fn dyadic_cell_index(&self, k: u32) -> BigInt {
        let scaled = self.0.numer() << k;
        scaled.div_floor(self.0.denom())
    }

    /// Number of bits in the denominator; the orbit budget watches this.
    pub fn denom_bits(&self) -> u64 {
        self.0.denom().bits()
    }

    /// Approximate value for rendering only; analysis never consumes this.
    pub fn to_f64_lossy(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            // Extremely large numerator/denominator: fall back on a ratio of
            // leading digits. Rendering precision is cosmetic.
            let n = self.0.numer().to_f64().unwrap_or(0.0);
            let d = self.0.denom().to_f64().unwrap_or(1.0);
            n / d
        })
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Strict grammar: optional leading `-`, then digits, then optionally
    /// `/` and digits. No whitespace, no `+`, no empty parts.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(ParseRationalError::Empty);
        }
        let malformed = || ParseRationalError::Malformed(s.to_string());
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (num_str, den_str) = match body.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (body, None),
        };
        if num_str.is_empty() || !num_str.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        let mut num: BigInt = num_str.parse().map_err(|_| malformed())?;
        if neg {
            num = -num;
        }
        let den: BigInt = match den_str {
            None => BigInt::one(),
            Some(d) => {
                if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(malformed());
                }
                d.parse().map_err(|_| malformed())?
            }
        };
        if den.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(s.to_string()));
        }
        Ok(Rational(BigRational::new(num, den)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

impl_binop!(Add, add);
impl_binop!(Sub, sub);
impl_binop!(Mul, mul);

impl Div for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(&self.0 / &rhs.0)
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        (&self).div(&rhs)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

/// Total order comparison against zero, used for sign scans.
pub fn sign(r: &Rational) -> Ordering {
    if r.is_zero() {
        Ordering::Equal
    } else if r.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_bigint(n)
    }
}

/// Smallest `t >= 0` with `2^t >= q`, for positive rational `q`.
///
/// Used for closed-form staircase band lookups; never scans pieces.
pub fn ceil_log2(q: &Rational) -> u32 {
    assert!(q.is_positive(), "ceil_log2 of non-positive rational");
    if *q <= Rational::one() {
        return 0;
    }
    // q = p/d > 1. Want smallest t with 2^t * d >= p.
    let p = q.numer();
    let d = q.denom();
    let mut t = (p.bits() - d.bits()) as u32;
    t = t.saturating_sub(1);
    while (d << t) < *p {
        t += 1;
    }
    t
}

/// Largest `t` with `2^t <= q`, for rational `q >= 1`.
pub fn floor_log2(q: &Rational) -> u32 {
    assert!(*q >= Rational::one(), "floor_log2 of rational below 1");
    let p = q.numer();
    let d = q.denom();
    let mut t = (p.bits() - d.bits()) as u32 + 1;
    while (d << t) > *p {
        t -= 1;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["0", "1", "-1", "1/3", "-7/12", "22/7", "1023/1024"] {
            assert_eq!(q(s).to_string(), s);
        }
        // Non-canonical input reduces.
        assert_eq!(q("4/6").to_string(), "2/3");
        assert_eq!(q("-4/2").to_string(), "-2");
    }

    #[test]
    fn parse_rejects_bad_grammar() {
        for s in ["", " 1", "1 ", "+1", "1/-2", "1//2", "a", "1.5", "1/", "/2", "--1"] {
            assert!(s.parse::<Rational>().is_err(), "accepted {s:?}");
        }
        assert!(matches!(
            "3/0".parse::<Rational>(),
            Err(ParseRationalError::ZeroDenominator(_))
        ));
    }

    #[test]
    fn exact_arithmetic() {
        let a = q("1/3");
        let b = q("1/6");
        assert_eq!(&a + &b, q("1/2"));
        assert_eq!(&a - &b, q("1/6"));
        assert_eq!(&a * &b, q("1/18"));
        assert_eq!(&a / &b, q("2"));
        assert_eq!(-&a, q("-1/3"));
        assert!(q("1/3") > q("333333/1000000"));
    }

    #[test]
    fn dyadic_cell_index_floors() {
        assert_eq!(q("0").dyadic_cell_index(3), 0.into());
        assert_eq!(q("1/8").dyadic_cell_index(3), 1.into());
        assert_eq!(q("1/3").dyadic_cell_index(3), 2.into());
        assert_eq!(q("-1/8").dyadic_cell_index(3), (-1).into());
        assert_eq!(q("1").dyadic_cell_index(3), 8.into());
    }

    #[test]
    fn log2_helpers() {
        assert_eq!(ceil_log2(&q("1")), 0);
        assert_eq!(ceil_log2(&q("2")), 1);
        assert_eq!(ceil_log2(&q("3")), 2);
        assert_eq!(ceil_log2(&q("1024")), 10);
        assert_eq!(ceil_log2(&q("1025")), 11);
        assert_eq!(ceil_log2(&q("7/2")), 2);
        assert_eq!(floor_log2(&q("1")), 0);
        assert_eq!(floor_log2(&q("2")), 1);
        assert_eq!(floor_log2(&q("3")), 1);
        assert_eq!(floor_log2(&q("1024")), 10);
        assert_eq!(floor_log2(&q("2047/2")), 9);
    }

    #[test]
    fn serde_as_string() {
        let v = q("-5/8");
        let js = serde_json::to_string(&v).unwrap();
        assert_eq!(js, "\"-5/8\"");
        let back: Rational = serde_json::from_str(&js).unwrap();
        assert_eq!(back, v);
    }
}
