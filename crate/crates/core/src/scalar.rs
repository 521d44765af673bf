//! Coefficient tower for the series engine.
//!
//! Exact rationals are the preferred coefficients; any operation whose result
//! leaves the rationals (a square root of a non-square, say) promotes to
//! double precision. Mixing an exact value with a float also promotes. The
//! series and cumulant machinery is generic over [`Coeff`] so the same code
//! runs over `Scalar` (the tagged exact/float union) or plain `f64`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A coefficient: exact rational or double-precision float.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn from_int(n: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => rational_to_f64(r),
            Scalar::Float(x) => *x,
        }
    }

    /// Demote to a float carrier.
    pub fn promote(&self) -> Scalar {
        Scalar::Float(self.to_f64())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_positive(),
            Scalar::Float(x) => *x > 0.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_negative(),
            Scalar::Float(x) => *x < 0.0,
        }
    }

    /// Compare with an explicit tolerance; exact pairs compare exactly.
    pub fn approx_eq(&self, other: &Scalar, tol: f64) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => (self.to_f64() - other.to_f64()).abs() <= tol,
        }
    }

    /// Positive square root. Perfect rational squares stay exact; every
    /// other positive value promotes to float. Nonpositive input is an error.
    pub fn sqrt_positive(&self) -> Result<Scalar> {
        if !self.is_positive() {
            return Err(Error::NonpositiveConstant);
        }
        match self {
            Scalar::Exact(r) => {
                if let Some(root) = exact_sqrt(r) {
                    Ok(Scalar::Exact(root))
                } else {
                    Ok(Scalar::Float(rational_to_f64(r).sqrt()))
                }
            }
            Scalar::Float(x) => Ok(Scalar::Float(x.sqrt())),
        }
    }

    pub fn pow(&self, n: u32) -> Scalar {
        let mut acc = Scalar::from_int(1);
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Float(x) => Scalar::Float(x.abs()),
        }
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // fall back through a reduced quotient for extreme magnitudes
        let n = r.numer().to_f64().unwrap_or(f64::MAX);
        let d = r.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}

fn exact_sqrt(r: &BigRational) -> Option<BigRational> {
    let num = int_sqrt(r.numer())?;
    let den = int_sqrt(r.denom())?;
    Some(BigRational::new(num, den))
}

fn int_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let root = n.sqrt();
    if &root * &root == *n {
        Some(root)
    } else {
        None
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                    (a, b) => Scalar::Float(a.to_f64() $op b.to_f64()),
                }
            }
        }
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                self.clone() $op rhs.clone()
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);
scalar_binop!(Div, div, /);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => {
                if r.denom() == &BigInt::from(1) {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Float(x) => write!(f, "{}", format_sig(*x)),
        }
    }
}

/// Floats render with 12 significant digits for reproducible tables.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let s = format!("{:.12e}", x);
    // prefer plain notation for ordinary magnitudes
    let mag = x.abs();
    if (1e-4..1e12).contains(&mag) {
        let digits = 12 - (mag.log10().floor() as i32 + 1);
        let digits = digits.clamp(0, 17) as usize;
        let mut out = format!("{:.*}", digits, x);
        if out.contains('.') {
            while out.ends_with('0') {
                out.pop();
            }
            if out.ends_with('.') {
                out.pop();
            }
        }
        out
    } else {
        s
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(_) => s.serialize_str(&self.to_string()),
            Scalar::Float(x) => s.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        scalar_from_value(&v).map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// Parse a scalar from a JSON value: integers and `"p/q"` strings are exact,
/// fractional numbers are floats.
pub fn scalar_from_value(v: &serde_json::Value) -> Result<Scalar> {
    match v {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Scalar::from_int(i))
            } else if let Some(x) = n.as_f64() {
                Ok(Scalar::Float(x))
            } else {
                Err(Error::SpecValidation(format!("bad number {n}")))
            }
        }
        serde_json::Value::String(s) => parse_scalar(s),
        other => Err(Error::SpecValidation(format!("expected number, got {other}"))),
    }
}

pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::SpecValidation(format!("bad rational {s}")))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::SpecValidation(format!("bad rational {s}")))?;
        if d.is_zero() {
            return Err(Error::SpecValidation("zero denominator".into()));
        }
        Ok(Scalar::Exact(BigRational::new(n, d)))
    } else if let Ok(n) = s.parse::<BigInt>() {
        Ok(Scalar::Exact(BigRational::from_integer(n)))
    } else if let Ok(x) = s.parse::<f64>() {
        Ok(Scalar::Float(x))
    } else {
        Err(Error::SpecValidation(format!("cannot parse scalar {s}")))
    }
}

/// What the series and cumulant engines need from a coefficient type.
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_positive(&self) -> bool;
    fn to_f64(&self) -> f64;
    fn sqrt_positive(&self) -> Result<Self>;
    /// Normalization hook applied after bulk operations. The tagged tower
    /// promotes every entry to float as soon as one entry is float.
    fn unify(coeffs: &mut [Self]) {
        let _ = coeffs;
    }
}

impl Coeff for Scalar {
    fn zero() -> Self {
        Scalar::from_int(0)
    }
    fn one() -> Self {
        Scalar::from_int(1)
    }
    fn from_int(n: i64) -> Self {
        Scalar::from_int(n)
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        Scalar::is_positive(self)
    }
    fn to_f64(&self) -> f64 {
        Scalar::to_f64(self)
    }
    fn sqrt_positive(&self) -> Result<Self> {
        Scalar::sqrt_positive(self)
    }
    fn unify(coeffs: &mut [Self]) {
        if coeffs.iter().any(|c| matches!(c, Scalar::Float(_))) {
            for c in coeffs.iter_mut() {
                if c.is_exact() {
                    *c = c.promote();
                }
            }
        }
    }
}

impl Coeff for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn is_positive(&self) -> bool {
        *self > 0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn sqrt_positive(&self) -> Result<Self> {
        if *self > 0.0 {
            Ok(self.sqrt())
        } else {
            Err(Error::NonpositiveConstant)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_arithmetic_is_closed() {
        let a = Scalar::ratio(1, 3);
        let b = Scalar::ratio(1, 6);
        assert_eq!(a.clone() + b.clone(), Scalar::ratio(1, 2));
        assert!((a * b).is_exact());
    }

    #[test]
    fn mixing_promotes_to_float() {
        let a = Scalar::ratio(1, 3);
        let b = Scalar::Float(0.5);
        match a + b {
            Scalar::Float(x) => assert!((x - (1.0 / 3.0 + 0.5)).abs() < 1e-15),
            other => panic!("expected float, got {other:?}"),
        }
    }

    #[test]
    fn sqrt_of_perfect_square_stays_exact() {
        assert_eq!(Scalar::ratio(1, 4).sqrt_positive().unwrap(), Scalar::ratio(1, 2));
        assert_eq!(Scalar::from_int(9).sqrt_positive().unwrap(), Scalar::from_int(3));
    }

    #[test]
    fn sqrt_of_non_square_promotes() {
        let r = Scalar::from_int(2).sqrt_positive().unwrap();
        assert!(!r.is_exact());
        assert!((r.to_f64() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn sqrt_rejects_nonpositive() {
        assert_eq!(Scalar::from_int(0).sqrt_positive(), Err(Error::NonpositiveConstant));
        assert_eq!(Scalar::from_int(-1).sqrt_positive(), Err(Error::NonpositiveConstant));
    }

    #[test]
    fn parse_and_display_round_trip() {
        let s = parse_scalar("-7/3").unwrap();
        assert_eq!(s, Scalar::ratio(-7, 3));
        assert_eq!(s.to_string(), "-7/3");
        assert_eq!(parse_scalar("4").unwrap().to_string(), "4");
    }
}
