//! Exact rational scalar used for every cake coordinate, payoff and statistic.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

/// Ratio of two arbitrary-precision integers, always kept in lowest terms
/// with a strictly positive denominator.
///
/// Crosses text boundaries as `"p/q"` (or `"p"` when the denominator is 1)
/// and JSON boundaries as `{"num": p, "den": q}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fraction(BigRational);

impl Fraction {
    /// `num / den`. Panics if `den` is zero; use [`Fraction::checked`] for
    /// untrusted input.
    pub fn new(num: i64, den: i64) -> Self {
        Self::checked(num, den).expect("zero denominator")
    }

    pub fn checked(num: i64, den: i64) -> Option<Self> {
        if den == 0 {
            return None;
        }
        Some(Self(BigRational::new(num.into(), den.into())))
    }

    pub fn from_bigints(num: BigInt, den: BigInt) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(Self(BigRational::new(num, den)))
    }

    pub fn integer(value: i64) -> Self {
        Self(BigRational::from_integer(value.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    /// `2^exp`, exact for negative exponents.
    pub fn pow2(exp: i32) -> Self {
        let two = BigRational::from_integer(BigInt::from(2));
        Self(num_traits::Pow::pow(two, exp))
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

    pub fn abs(&self) -> Self {
        Self(self.0.abs())
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self(self.0.recip()))
        }
    }

    /// Whether `0 <= self <= 1`.
    pub fn is_unit_interval(&self) -> bool {
        !self.is_negative() && self.0 <= BigRational::one()
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Nearest `f64`; only for display and plotting.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Plain decimal rendering rounded (half away from zero) to `sig`
    /// significant digits, trailing zeros trimmed.
    pub fn to_decimal(&self, sig: usize) -> String {
        assert!(sig > 0, "need at least one significant digit");
        if self.is_zero() {
            return "0".to_string();
        }
        let ten = BigRational::from_integer(BigInt::from(10));
        let magnitude = self.0.abs();

        // exponent e with 10^e <= magnitude < 10^(e+1)
        let mut e = magnitude.numer().to_string().len() as i32
            - magnitude.denom().to_string().len() as i32;
        let pow10 = |k: i32| -> BigRational { num_traits::Pow::pow(ten.clone(), k) };
        while magnitude < pow10(e) {
            e -= 1;
        }
        while magnitude >= pow10(e + 1) {
            e += 1;
        }

        let shift = sig as i32 - 1 - e;
        let scaled = &magnitude * pow10(shift);
        let (q, r) = scaled.numer().div_rem(scaled.denom());
        let mut mantissa = q;
        if BigInt::from(2) * r >= *scaled.denom() {
            mantissa += 1;
        }
        if mantissa.to_string().len() > sig {
            mantissa /= 10;
            e += 1;
        }

        let digits = mantissa.to_string();
        let mut out = String::new();
        if self.is_negative() {
            out.push('-');
        }
        if e >= sig as i32 - 1 {
            out.push_str(&digits);
            out.extend(std::iter::repeat_n('0', (e - sig as i32 + 1) as usize));
            return out;
        }
        let mut body = if e >= 0 {
            let split = (e + 1) as usize;
            format!("{}.{}", &digits[..split], &digits[split..])
        } else {
            let zeros = "0".repeat((-e - 1) as usize);
            format!("0.{zeros}{digits}")
        };
        while body.ends_with('0') {
            body.pop();
        }
        if body.ends_with('.') {
            body.pop();
        }
        out.push_str(&body);
        out
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid fraction {0:?}: expected \"p/q\" or an integer")]
pub struct ParseFractionError(pub String);

impl FromStr for Fraction {
    type Err = ParseFractionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseFractionError(s.to_string());
        let text = s.trim();
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        Fraction::from_bigints(num, den).ok_or_else(bad)
    }
}

impl From<i64> for Fraction {
    fn from(value: i64) -> Self {
        Fraction::integer(value)
    }
}

impl From<usize> for Fraction {
    fn from(value: usize) -> Self {
        Self(BigRational::from_integer(BigInt::from(value)))
    }
}

macro_rules! binary_op {
    ($trait:ident, $method:ident) => {
        impl $trait<Fraction> for Fraction {
            type Output = Fraction;
            fn $method(self, rhs: Fraction) -> Fraction {
                Fraction(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Fraction> for Fraction {
            type Output = Fraction;
            fn $method(self, rhs: &Fraction) -> Fraction {
                Fraction(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Fraction> for &Fraction {
            type Output = Fraction;
            fn $method(self, rhs: Fraction) -> Fraction {
                Fraction((&self.0).$method(rhs.0))
            }
        }
        impl $trait<&Fraction> for &Fraction {
            type Output = Fraction;
            fn $method(self, rhs: &Fraction) -> Fraction {
                Fraction((&self.0).$method(&rhs.0))
            }
        }
    };
}

binary_op!(Add, add);
binary_op!(Sub, sub);
binary_op!(Mul, mul);
binary_op!(Div, div);

impl AddAssign<&Fraction> for Fraction {
    fn add_assign(&mut self, rhs: &Fraction) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for Fraction {
    fn add_assign(&mut self, rhs: Fraction) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Fraction> for Fraction {
    fn sub_assign(&mut self, rhs: &Fraction) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Fraction> for Fraction {
    fn mul_assign(&mut self, rhs: &Fraction) {
        self.0 *= &rhs.0;
    }
}

impl Neg for Fraction {
    type Output = Fraction;
    fn neg(self) -> Fraction {
        Fraction(-self.0)
    }
}

impl Neg for &Fraction {
    type Output = Fraction;
    fn neg(self) -> Fraction {
        Fraction(-&self.0)
    }
}

impl Sum for Fraction {
    fn sum<I: Iterator<Item = Fraction>>(iter: I) -> Self {
        iter.fold(Fraction::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Fraction> for Fraction {
    fn sum<I: Iterator<Item = &'a Fraction>>(iter: I) -> Self {
        iter.fold(Fraction::zero(), |acc, x| acc + x)
    }
}

impl Product for Fraction {
    fn product<I: Iterator<Item = Fraction>>(iter: I) -> Self {
        iter.fold(Fraction::one(), |acc, x| acc * x)
    }
}

// JSON integers when they fit in i64, decimal strings otherwise.
fn big_to_json<S: Serializer>(value: &BigInt) -> Result<serde_json::Value, S::Error> {
    Ok(match value.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(value.to_string()),
    })
}

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut state = serializer.serialize_struct("Fraction", 2)?;
        state.serialize_field("num", &big_to_json::<S>(self.numer())?)?;
        state.serialize_field("den", &big_to_json::<S>(self.denom())?)?;
        state.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BigIntRepr {
    Int(i64),
    Text(String),
}

impl BigIntRepr {
    fn into_bigint<E: de::Error>(self) -> Result<BigInt, E> {
        match self {
            BigIntRepr::Int(v) => Ok(BigInt::from(v)),
            BigIntRepr::Text(s) => s.parse().map_err(|_| E::custom(format!("bad integer {s:?}"))),
        }
    }
}

impl<'de> Deserialize<'de> for Fraction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            num: BigIntRepr,
            den: BigIntRepr,
        }
        let raw = Raw::deserialize(deserializer)?;
        let num = raw.num.into_bigint::<D::Error>()?;
        let den = raw.den.into_bigint::<D::Error>()?;
        Fraction::from_bigints(num, den).ok_or_else(|| de::Error::custom("zero denominator"))
    }
}
