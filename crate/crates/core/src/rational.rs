//! Exact scalars and extended bounds.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator by `num_rational`.
pub type Rational = BigRational;
pub type Integer = BigInt;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    assert!(d != 0, "zero denominator");
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn rat_vec(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&x| rat(x)).collect()
}

/// Returns the value as `i64` when it is an integer that fits.
pub fn to_i64(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        r.to_integer().to_i64()
    } else {
        None
    }
}

pub fn floor_i64(r: &Rational) -> Option<i64> {
    r.floor().to_integer().to_i64()
}

pub fn ceil_i64(r: &Rational) -> Option<i64> {
    r.ceil().to_integer().to_i64()
}

/// `r - floor(r)`, always in `[0, 1)`.
pub fn fract(r: &Rational) -> Rational {
    r - r.floor()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError(pub String);

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational {:?}", self.0)
    }
}

impl std::error::Error for ParseRationalError {}

/// Parses `"p"` or `"p/q"` with optional sign on `p`. Whitespace around the
/// tokens is not accepted.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let bad = || ParseRationalError(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num = parse_int(num).ok_or_else(bad)?;
    let den = match den {
        Some(d) => {
            if d.starts_with(['-', '+']) {
                return Err(bad());
            }
            parse_int(d).ok_or_else(bad)?
        }
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix('-').or_else(|| s.strip_prefix('+')).unwrap_or(s);
    if digits.is_empty() || digits.len() > 4096 || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Renders `"p"` for integers and `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn lcm_of_denominators<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

/// A bound that may be infinite. Variant order gives the total order
/// `NegInf < Finite(_) < PosInf`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedBound {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl ExtendedBound {
    pub fn int(v: i64) -> Self {
        ExtendedBound::Finite(rat(v))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtendedBound::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedBound::Finite(_))
    }

    pub fn cmp_rat(&self, r: &Rational) -> Ordering {
        match self {
            ExtendedBound::NegInf => Ordering::Less,
            ExtendedBound::PosInf => Ordering::Greater,
            ExtendedBound::Finite(v) => v.cmp(r),
        }
    }
}

impl From<i64> for ExtendedBound {
    fn from(v: i64) -> Self {
        ExtendedBound::int(v)
    }
}

impl From<Rational> for ExtendedBound {
    fn from(v: Rational) -> Self {
        ExtendedBound::Finite(v)
    }
}

impl fmt::Display for ExtendedBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedBound::NegInf => write!(f, "-inf"),
            ExtendedBound::PosInf => write!(f, "+inf"),
            ExtendedBound::Finite(v) => write!(f, "{}", format_rational(v)),
        }
    }
}

pub fn finite_bounds(xs: &[i64]) -> Vec<ExtendedBound> {
    xs.iter().map(|&x| ExtendedBound::int(x)).collect()
}
