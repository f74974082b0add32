//! Exact rational exponents of `t`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// An exact rational number used as an exponent of `t` (and as a tropical
/// value). Always stored in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Exponent(BigRational);

impl Exponent {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Exponent(BigRational::new(numer.into(), denom.into()))
    }

    pub fn integer(n: i64) -> Self {
        Exponent(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Exponent(BigRational::zero())
    }

    pub fn from_rational(q: BigRational) -> Self {
        Exponent(q)
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn into_rational(self) -> BigRational {
        self.0
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

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// Multiplies by a nonnegative integer (the `i·b` pairing of a monomial
    /// exponent with an order vector).
    pub fn scale(&self, k: u32) -> Exponent {
        Exponent(&self.0 * BigRational::from_integer(k.into()))
    }

    /// Divides by a positive integer.
    pub fn div_int(&self, k: u32) -> Exponent {
        assert!(k > 0, "division by zero");
        Exponent(&self.0 / BigRational::from_integer(k.into()))
    }

    /// `Σ i_j b_j` for a monomial exponent vector `i` and an order vector `b`.
    pub fn dot(monomial: &[u32], b: &[Exponent]) -> Exponent {
        debug_assert_eq!(monomial.len(), b.len());
        monomial
            .iter()
            .zip(b)
            .filter(|(k, _)| **k != 0)
            .fold(Exponent::zero(), |acc, (k, e)| acc + e.scale(*k))
    }

    /// Renders as `p/q`, or `p` for integers.
    pub fn to_ratio_string(&self) -> String {
        self.0.to_string()
    }

    pub(crate) fn is_one(&self) -> bool {
        self.0.is_one()
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Exponent {
    type Err = Error;

    /// Accepts `p`, `p/q`, and decimals such as `0.5`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_rational(s).map(Exponent)
    }
}

/// Parses an exact rational from `p`, `p/q`, or a finite decimal.
pub fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let s = s.trim();
    let bad = || Error::parse(0, format!("invalid rational number `{s}`"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::DivisionByZero);
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let negative = int.trim_start().starts_with('-');
        let int_digits = int.trim().trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit())
            || !int_digits.chars().all(|c| c.is_ascii_digit())
            || (int_digits.is_empty() && frac.is_empty())
        {
            return Err(bad());
        }
        let digits = format!("{int_digits}{frac}");
        let mantissa: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let q = BigRational::new(mantissa, scale);
        return Ok(if negative { -q } else { q });
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(p))
}

impl From<i64> for Exponent {
    fn from(n: i64) -> Self {
        Exponent::integer(n)
    }
}

impl From<BigRational> for Exponent {
    fn from(q: BigRational) -> Self {
        Exponent(q)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Exponent> for &Exponent {
            type Output = Exponent;
            fn $method(self, rhs: &Exponent) -> Exponent {
                Exponent((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Exponent> for Exponent {
            type Output = Exponent;
            fn $method(self, rhs: Exponent) -> Exponent {
                Exponent(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Exponent> for Exponent {
            type Output = Exponent;
            fn $method(self, rhs: &Exponent) -> Exponent {
                Exponent(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent(-self.0)
    }
}

impl Neg for &Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent(-&self.0)
    }
}
