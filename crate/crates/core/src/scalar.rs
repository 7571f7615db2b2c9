use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An exact rational number, always kept in lowest terms with a positive
/// denominator.
///
/// Displays as `p/q`, or as `p` when the denominator is 1. Serializes as
/// `{"numerator": "p", "denominator": "q"}` with decimal digit strings so that
/// values of any size survive a JSON round trip.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numerator: impl Into<BigInt>, denominator: impl Into<BigInt>) -> Self {
        let denominator = denominator.into();
        assert!(!denominator.is_zero(), "zero denominator");
        Rational(BigRational::new(numerator.into(), denominator))
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(value.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// The value as an integer, if it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.0.numer().clone())
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Integer power; negative exponents invert (panics on `0^-k`).
    pub fn pow(&self, exponent: i32) -> Self {
        Rational(num_traits::Pow::pow(&self.0, exponent))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal expansion with exactly `digits` fractional digits, rounded half
    /// away from zero.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let scale = num_traits::pow(BigInt::from(10), digits);
        let scaled = self.0.numer().abs() * &scale;
        let (quotient, remainder) = scaled.div_rem(self.0.denom());
        let rounded = if remainder * 2u32 >= *self.0.denom() {
            quotient + 1u32
        } else {
            quotient
        };
        let sign = if self.0.is_negative() && !rounded.is_zero() {
            "-"
        } else {
            ""
        };
        let (int_part, frac_part) = rounded.div_rem(&scale);
        if digits == 0 {
            format!("{sign}{int_part}")
        } else {
            format!(
                "{sign}{int_part}.{:0>width$}",
                frac_part.to_string(),
                width = digits
            )
        }
    }

    /// Parses `p/q` or `p`.
    pub fn parse(text: &str) -> Option<Self> {
        let text = text.trim();
        match text.split_once('/') {
            Some((p, q)) => {
                let q: BigInt = q.trim().parse().ok()?;
                if q.is_zero() {
                    return None;
                }
                Some(Rational::new(p.trim().parse::<BigInt>().ok()?, q))
            }
            None => Some(Rational::from_integer(text.parse::<BigInt>().ok()?)),
        }
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

impl From<BigInt> for Rational {
    fn from(value: BigInt) -> Self {
        Rational::from_integer(value)
    }
}

impl From<i64> for Rational {
    fn from(value: i64) -> Self {
        Rational::from_integer(value)
    }
}

impl From<BigRational> for Rational {
    fn from(value: BigRational) -> Self {
        Rational(value)
    }
}

impl From<Rational> for BigRational {
    fn from(value: Rational) -> Self {
        value.0
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut state = serializer.serialize_struct("Rational", 2)?;
        state.serialize_field("numerator", &self.0.numer().to_string())?;
        state.serialize_field("denominator", &self.0.denom().to_string())?;
        state.end()
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            numerator: String,
            denominator: String,
        }
        let raw = Raw::deserialize(deserializer)?;
        let numerator: BigInt = raw.numerator.parse().map_err(serde::de::Error::custom)?;
        let denominator: BigInt = raw.denominator.parse().map_err(serde::de::Error::custom)?;
        if !denominator.is_positive() {
            return Err(serde::de::Error::custom("denominator must be positive"));
        }
        Ok(Rational::new(numerator, denominator))
    }
}
