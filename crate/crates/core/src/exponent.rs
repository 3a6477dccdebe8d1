//! Extended exponents `p ∈ [1, ∞]` stored through their exact reciprocals.

use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Exact rational used for every reciprocal exponent and interpolation weight.
pub type Rational = num_rational::BigRational;

/// `numer / denom` in lowest terms; panics if `denom == 0`.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub(crate) fn half() -> Rational {
    rat(1, 2)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn render_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// An exponent `p ∈ [1, ∞]`, held as `u = 1/p ∈ [0, 1]`.
///
/// `u = 0` encodes `p = ∞` and `u = 1` encodes `p = 1`. All mixed-norm
/// interpolation conditions are affine in `u`, which is why the reciprocal is
/// the primary coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Exponent {
    u: Rational,
}

impl Exponent {
    pub fn from_recip(u: Rational) -> Result<Self> {
        if u.is_negative() || u > Rational::one() {
            return Err(Error::ReciprocalOutOfRange(render_rational(&u)));
        }
        Ok(Self { u })
    }

    /// Exponent with integer value `p ≥ 1`.
    pub fn integer(p: u64) -> Result<Self> {
        if p == 0 {
            return Err(Error::ExponentBelowOne { text: "0".into() });
        }
        Ok(Self {
            u: Rational::new(BigInt::one(), BigInt::from(p)),
        })
    }

    pub fn infinity() -> Self {
        Self { u: Rational::zero() }
    }

    pub fn two() -> Self {
        Self { u: half() }
    }

    pub fn recip(&self) -> &Rational {
        &self.u
    }

    pub fn recip_f64(&self) -> f64 {
        to_f64(&self.u)
    }

    pub fn is_infinite(&self) -> bool {
        self.u.is_zero()
    }

    /// `p` as a double; `∞` for `u = 0`.
    pub fn value_f64(&self) -> f64 {
        if self.u.is_zero() {
            f64::INFINITY
        } else {
            to_f64(&self.u.recip())
        }
    }

    /// Canonical text: `"inf"` or `p` as a lowest-terms fraction.
    pub fn render(&self) -> String {
        if self.u.is_zero() {
            "inf".into()
        } else {
            render_rational(&self.u.recip())
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_exponent(s)
    }
}

fn malformed(text: &str, reason: &'static str) -> Error {
    Error::MalformedExponent {
        text: text.into(),
        reason,
    }
}

fn parse_digits(text: &str, digits: &str) -> Result<BigInt> {
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(malformed(text, "expected decimal digits"));
    }
    digits
        .parse::<BigInt>()
        .map_err(|_| malformed(text, "expected decimal digits"))
}

/// Parses `"inf"`, an integer, a fraction `"a/b"` or a decimal literal.
///
/// Decimals are converted to the exact rational they denote (`"2.5"` is
/// `5/2`), never through a binary float.
pub fn parse_exponent(text: &str) -> Result<Exponent> {
    let t = text.trim();
    if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") || t == "∞" {
        return Ok(Exponent::infinity());
    }
    let p = if let Some((a, b)) = t.split_once('/') {
        let numer = parse_digits(text, a.trim())?;
        let denom = parse_digits(text, b.trim())?;
        if denom.is_zero() {
            return Err(malformed(text, "zero denominator"));
        }
        Rational::new(numer, denom)
    } else if let Some((int, frac)) = t.split_once('.') {
        let int = if int.is_empty() {
            BigInt::zero()
        } else {
            parse_digits(text, int)?
        };
        let frac_digits = parse_digits(text, frac)?;
        let scale = num_traits::pow(BigInt::from(10u32), frac.len());
        Rational::new(int * &scale + frac_digits, scale)
    } else {
        Rational::from_integer(parse_digits(text, t)?)
    };
    if p < Rational::one() {
        return Err(Error::ExponentBelowOne { text: text.into() });
    }
    Ok(Exponent { u: p.recip() })
}

/// Interpolation weight in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weight(Rational);

impl Weight {
    pub fn new(value: Rational) -> Result<Self> {
        if value.is_negative() || value > Rational::one() {
            return Err(Error::WeightOutOfRange(render_rational(&value)));
        }
        Ok(Self(value))
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.0)
    }

    /// `1 − w`.
    pub fn complement(&self) -> Weight {
        Weight(Rational::one() - &self.0)
    }

    pub fn is_interior(&self) -> bool {
        self.0.is_positive() && self.0 < Rational::one()
    }

    /// `"a/b"` (or `"a"` for integers).
    pub fn render(&self) -> String {
        render_rational(&self.0)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// `(1 − w)·a + w·b` on reciprocals.
pub fn convex_combine(a: &Exponent, b: &Exponent, w: &Weight) -> Exponent {
    let u = (Rational::one() - w.value()) * &a.u + w.value() * &b.u;
    Exponent { u }
}

/// A point `(1/p, 1/θ)` of the unit square.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReciprocalPoint {
    u: Rational,
    v: Rational,
}

impl ReciprocalPoint {
    pub fn new(u: Rational, v: Rational) -> Result<Self> {
        Exponent::from_recip(u.clone())?;
        Exponent::from_recip(v.clone())?;
        Ok(Self { u, v })
    }

    pub fn from_exponents(p: &Exponent, theta: &Exponent) -> Self {
        Self {
            u: p.u.clone(),
            v: theta.u.clone(),
        }
    }

    pub fn u(&self) -> &Rational {
        &self.u
    }

    pub fn v(&self) -> &Rational {
        &self.v
    }

    pub fn p(&self) -> Exponent {
        Exponent { u: self.u.clone() }
    }

    pub fn theta(&self) -> Exponent {
        Exponent { u: self.v.clone() }
    }

    /// `(1 − w)·a + w·b` componentwise.
    pub fn combine(a: &Self, b: &Self, w: &Weight) -> Self {
        let c = Rational::one() - w.value();
        Self {
            u: &c * &a.u + w.value() * &b.u,
            v: &c * &a.v + w.value() * &b.v,
        }
    }
}

impl fmt::Display for ReciprocalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", render_rational(&self.u), render_rational(&self.v))
    }
}
