use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

static TOLERANCE_BITS: AtomicU64 = AtomicU64::new(1e-9f64.to_bits());

/// Relative tolerance used by `Scalar` equality whenever a floating value is involved.
pub fn tolerance() -> f64 {
    f64::from_bits(TOLERANCE_BITS.load(Ordering::Relaxed))
}

/// Replace the global relative tolerance. Non-positive or non-finite values are ignored.
pub fn set_tolerance(tol: f64) {
    if tol.is_finite() && tol > 0.0 {
        TOLERANCE_BITS.store(tol.to_bits(), Ordering::Relaxed);
    }
}

/// A field element: an exact rational or a complex double.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(BigRational),
    Float(Complex64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(BigRational::one())
    }

    pub fn int(n: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    /// Exact `n/d`. Panics when `d == 0`.
    pub fn ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Scalar::Exact(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn real(x: f64) -> Self {
        Scalar::Float(Complex64::new(x, 0.0))
    }

    pub fn complex(re: f64, im: f64) -> Self {
        Scalar::Float(Complex64::new(re, im))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    /// Structural zero test: exact zero, or a float that is exactly 0.
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Exact(r) => Complex64::new(rational_to_f64(r), 0.0),
            Scalar::Float(z) => *z,
        }
    }

    pub fn to_float(&self) -> Scalar {
        Scalar::Float(self.to_complex())
    }

    pub fn abs(&self) -> f64 {
        match self {
            Scalar::Exact(r) => rational_to_f64(r).abs(),
            Scalar::Float(z) => z.norm(),
        }
    }

    pub fn re(&self) -> f64 {
        self.to_complex().re
    }

    pub fn im(&self) -> f64 {
        match self {
            Scalar::Exact(_) => 0.0,
            Scalar::Float(z) => z.im,
        }
    }

    /// Real up to `tol` relative to the modulus (exact values are always real).
    pub fn is_real(&self, tol: f64) -> bool {
        match self {
            Scalar::Exact(_) => true,
            Scalar::Float(z) => z.im.abs() <= tol * z.norm().max(1.0),
        }
    }

    pub fn conj(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.clone()),
            Scalar::Float(z) => Scalar::Float(z.conj()),
        }
    }

    pub fn recip(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Exact(r) => Scalar::Exact(r.recip()),
            Scalar::Float(z) => Scalar::Float(z.inv()),
        })
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self * &other.recip()?)
    }

    pub fn powi(&self, n: i32) -> Scalar {
        match self {
            Scalar::Exact(r) => {
                if n < 0 && r.is_zero() {
                    return Scalar::Float(Complex64::new(f64::INFINITY, 0.0));
                }
                Scalar::Exact(num_traits::Pow::pow(r, n))
            }
            Scalar::Float(z) => Scalar::Float(z.powi(n)),
        }
    }

    pub fn square(&self) -> Scalar {
        self * self
    }

    /// Principal square root, always floating.
    pub fn sqrt(&self) -> Scalar {
        Scalar::Float(self.to_complex().sqrt())
    }

    /// Principal cube root, always floating.
    pub fn cbrt(&self) -> Scalar {
        Scalar::Float(principal_cbrt(self.to_complex()))
    }

    /// Equality with relative tolerance `tol`; two exact values compare exactly.
    pub fn approx_eq(&self, other: &Scalar, tol: f64) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => {
                let (a, b) = (self.to_complex(), other.to_complex());
                let scale = a.norm().max(b.norm());
                (a - b).norm() <= tol * scale
            }
        }
    }
}

pub(crate) fn principal_cbrt(z: Complex64) -> Complex64 {
    if z.im == 0.0 && z.re >= 0.0 {
        return Complex64::new(z.re.cbrt(), 0.0);
    }
    Complex64::from_polar(z.norm().cbrt(), z.arg() / 3.0)
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // fall back on scaling for huge numerators/denominators
    let n = r.numer();
    let d = r.denom();
    let shift = n.bits().max(d.bits()).saturating_sub(900) as usize;
    let n2: BigInt = n >> shift;
    let d2: BigInt = d >> shift;
    n2.to_f64().unwrap_or(f64::NAN) / d2.to_f64().unwrap_or(f64::NAN)
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other, tolerance())
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<i32> for Scalar {
    fn from(n: i32) -> Self {
        Scalar::int(n as i64)
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::real(x)
    }
}

impl From<Complex64> for Scalar {
    fn from(z: Complex64) -> Self {
        Scalar::Float(z)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::Exact(r)
    }
}

fn binop(
    a: &Scalar,
    b: &Scalar,
    exact: impl Fn(&BigRational, &BigRational) -> BigRational,
    float: impl Fn(Complex64, Complex64) -> Complex64,
) -> Scalar {
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => Scalar::Exact(exact(x, y)),
        _ => Scalar::Float(float(a.to_complex(), b.to_complex())),
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                binop(self, rhs, |x, y| x $op y, |x, y| x $op y)
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                &self $op &rhs
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                &self $op rhs
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self $op &rhs
            }
        }
    };
}

impl_binop!(Add, add, +);
impl_binop!(Sub, sub, -);
impl_binop!(Mul, mul, *);

impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    /// Panics on exact division by zero; use [`Scalar::checked_div`] to avoid it.
    fn div(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(x), Scalar::Exact(y)) => {
                assert!(!y.is_zero(), "exact division by zero");
                Scalar::Exact(x / y)
            }
            _ => Scalar::Float(self.to_complex() / rhs.to_complex()),
        }
    }
}

impl Div<Scalar> for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        &self / &rhs
    }
}

impl Div<&Scalar> for Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        &self / rhs
    }
}

impl Div<Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        self / &rhs
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float(z) => Scalar::Float(-z),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Float(z) => {
                if z.im == 0.0 {
                    write!(f, "{}", float_str(z.re))
                } else if z.im < 0.0 {
                    write!(f, "{}-{}i", float_str(z.re), float_str(-z.im))
                } else {
                    write!(f, "{}+{}i", float_str(z.re), float_str(z.im))
                }
            }
        }
    }
}

/// Shortest round-trip form, switching to exponent notation far from 1.
fn float_str(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else if x.abs() < 1e-4 || x.abs() >= 1e16 {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => BigInt::from_str(s).ok().map(BigRational::from_integer),
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts `p`, `p/q`, a real float like `1.5e-3`, or a complex literal like `1+2i`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Some(r) = parse_rational(t) {
            return Ok(Scalar::Exact(r));
        }
        if let Ok(x) = t.parse::<f64>() {
            return Ok(Scalar::real(x));
        }
        if let Ok(z) = Complex64::from_str(t) {
            return Ok(Scalar::Float(z));
        }
        Err(Error::Parse(format!("not a scalar: {s:?}")))
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(r) => serializer.serialize_str(&format!("{}/{}", r.numer(), r.denom())),
            Scalar::Float(z) => {
                let mut t = serializer.serialize_tuple(2)?;
                t.serialize_element(&z.re)?;
                t.serialize_element(&z.im)?;
                t.end()
            }
        }
    }
}

struct ScalarVisitor;

impl<'de> Visitor<'de> for ScalarVisitor {
    type Value = Scalar;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a \"p/q\" string, a number, or a [re, im] pair")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Scalar, E> {
        Scalar::from_str(v).map_err(E::custom)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Scalar, E> {
        Ok(Scalar::int(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Scalar, E> {
        Ok(Scalar::Exact(BigRational::from_integer(BigInt::from(v))))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Scalar, E> {
        Ok(Scalar::real(v))
    }

    fn visit_seq<A: de::SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Scalar, A::Error> {
        let re: f64 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
        let im: f64 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
        if seq.next_element::<f64>()?.is_some() {
            return Err(de::Error::invalid_length(3, &self));
        }
        Ok(Scalar::complex(re, im))
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Scalar, D::Error> {
        deserializer.deserialize_any(ScalarVisitor)
    }
}

/// Sign of a real scalar as -1, 0 or 1; floats use the real part.
pub fn sign_of(s: &Scalar) -> i8 {
    match s {
        Scalar::Exact(r) => {
            if r.is_zero() {
                0
            } else if r.is_positive() {
                1
            } else {
                -1
            }
        }
        Scalar::Float(z) => {
            if z.re > 0.0 {
                1
            } else if z.re < 0.0 {
                -1
            } else {
                0
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_display_round_trips() {
        for z in [Complex64::new(1.5e-16, -2.0), Complex64::new(-3.0, 4e-20), Complex64::new(0.25, 0.0), Complex64::new(-0.0, 0.0)] {
            let s = Scalar::Float(z).to_string();
            let back: Scalar = s.parse().unwrap();
            assert_eq!(back.to_complex(), z, "{s}");
        }
        assert_eq!(Scalar::real(-0.0).to_string(), "0");
        assert_eq!(Scalar::real(1e-20).to_string(), "1e-20");
    }

    #[test]
    fn exact_stays_reduced() {
        let s = Scalar::ratio(6, -4);
        let r = s.as_rational().unwrap();
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
    }

    #[test]
    fn mixed_arithmetic_promotes() {
        let s = Scalar::ratio(1, 3) + Scalar::real(1.0);
        assert!(!s.is_exact());
        assert!((s.re() - 4.0 / 3.0).abs() < 1e-15);
        let e = Scalar::ratio(1, 3) * Scalar::int(3);
        assert!(e.is_exact());
        assert_eq!(e, Scalar::one());
    }

    #[test]
    fn json_round_trip() {
        let e = Scalar::ratio(-7, 3);
        let txt = serde_json::to_string(&e).unwrap();
        assert_eq!(txt, "\"-7/3\"");
        let back: Scalar = serde_json::from_str(&txt).unwrap();
        assert!(back.is_exact() && back == e);

        let f = Scalar::complex(0.5, -2.0);
        let txt = serde_json::to_string(&f).unwrap();
        assert_eq!(txt, "[0.5,-2.0]");
        let back: Scalar = serde_json::from_str(&txt).unwrap();
        assert_eq!(back.to_complex(), Complex64::new(0.5, -2.0));

        let i: Scalar = serde_json::from_str("4").unwrap();
        assert!(i.is_exact());
        let x: Scalar = serde_json::from_str("0.25").unwrap();
        assert!(!x.is_exact());
    }

    #[test]
    fn parse_literals() {
        assert!(Scalar::from_str("3/9").unwrap().is_exact());
        assert_eq!(Scalar::from_str("-2").unwrap(), Scalar::int(-2));
        let z = Scalar::from_str("1+2i").unwrap();
        assert_eq!(z.to_complex(), Complex64::new(1.0, 2.0));
        assert!(Scalar::from_str("1/0").is_err() || !Scalar::from_str("1/0").unwrap().is_exact());
        assert!(Scalar::from_str("banana").is_err());
    }

    #[test]
    fn cube_root_is_principal() {
        let c = Scalar::real(-8.0).cbrt().to_complex();
        assert!((c - Complex64::from_polar(2.0, std::f64::consts::PI / 3.0)).norm() < 1e-14);
        assert!((Scalar::int(27).cbrt().re() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn tolerance_equality() {
        let a = Scalar::real(1.0);
        let b = Scalar::real(1.0 + 1e-12);
        assert_eq!(a, b);
        assert_ne!(a, Scalar::real(1.0 + 1e-6));
    }
}
