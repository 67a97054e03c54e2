//! Points, lines and coordinate changes of the projective plane.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::scalar::{tolerance, Scalar};
use crate::error::{Error, Result};

/// Magnitudes within this fraction of the maximum are treated as tied when picking a pivot.
const PIVOT_TIE: f64 = 1e-6;

fn cross(a: &[Scalar; 3], b: &[Scalar; 3]) -> [Scalar; 3] {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

pub(crate) fn dot(a: &[Scalar; 3], b: &[Scalar; 3]) -> Scalar {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

fn all_exact(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_exact)
}

/// Index of the first coordinate whose magnitude ties with the largest one.
pub(crate) fn pivot_index(v: &[Complex64; 3]) -> usize {
    let m = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    (0..3).find(|&i| v[i].norm() >= m * (1.0 - PIVOT_TIE)).unwrap_or(0)
}

fn normalize_triple(v: &[Scalar; 3]) -> [Scalar; 3] {
    if all_exact(v) {
        let rats: Vec<&BigRational> = v.iter().map(|s| s.as_rational().unwrap()).collect();
        let mut l = BigInt::one();
        for r in &rats {
            l = l.lcm(r.denom());
        }
        let ints: Vec<BigInt> = rats.iter().map(|r| r.numer() * (&l / r.denom())).collect();
        let mut g = BigInt::zero();
        for i in &ints {
            g = g.gcd(i);
        }
        let first = ints.iter().find(|i| !i.is_zero()).expect("nonzero triple");
        if first.is_negative() {
            g = -g;
        }
        let out: Vec<Scalar> = ints
            .iter()
            .map(|i| Scalar::Exact(BigRational::from_integer(i / &g)))
            .collect();
        return [out[0].clone(), out[1].clone(), out[2].clone()];
    }
    let c = v.clone().map(|s| s.to_complex());
    let p = pivot_index(&c);
    let d = c[p];
    let mut out = c.map(|z| Scalar::Float(z / d));
    out[p] = Scalar::Float(Complex64::new(1.0, 0.0));
    out
}

fn triple_distance(a: &[Scalar; 3], b: &[Scalar; 3]) -> f64 {
    if all_exact(a) && all_exact(b) {
        return if cross(a, b).iter().all(Scalar::is_zero) {
            0.0
        } else {
            one_sided(&a.clone().map(|s| s.to_complex()), &b.clone().map(|s| s.to_complex())).max(f64::MIN_POSITIVE)
        };
    }
    let ca = a.clone().map(|s| s.to_complex());
    let cb = b.clone().map(|s| s.to_complex());
    one_sided(&ca, &cb).max(one_sided(&cb, &ca))
}

fn one_sided(a: &[Complex64; 3], b: &[Complex64; 3]) -> f64 {
    let p = pivot_index(a);
    let an = a.map(|z| z / a[p]);
    let bmax = b.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if b[p].norm() <= 1e-12 * bmax {
        return f64::INFINITY;
    }
    let bn = b.map(|z| z / b[p]);
    (0..3).map(|i| (an[i] - bn[i]).norm()).fold(0.0, f64::max)
}

macro_rules! homogeneous_triple {
    ($name:ident) => {
        #[derive(Clone, Debug)]
        pub struct $name {
            c: [Scalar; 3],
        }

        impl $name {
            pub fn new(x: Scalar, y: Scalar, z: Scalar) -> Result<Self> {
                Self::from_array([x, y, z])
            }

            pub fn from_array(c: [Scalar; 3]) -> Result<Self> {
                if c.iter().all(Scalar::is_zero) {
                    return Err(Error::ZeroVector);
                }
                if c.iter().any(|s| !s.to_complex().is_finite()) {
                    return Err(Error::InvalidInput("non-finite coordinate".into()));
                }
                Ok(Self { c })
            }

            pub fn from_ints(x: i64, y: i64, z: i64) -> Result<Self> {
                Self::new(Scalar::int(x), Scalar::int(y), Scalar::int(z))
            }

            pub fn from_complex(c: [Complex64; 3]) -> Result<Self> {
                Self::from_array(c.map(Scalar::Float))
            }

            pub fn coords(&self) -> &[Scalar; 3] {
                &self.c
            }

            pub fn to_complex(&self) -> [Complex64; 3] {
                self.c.clone().map(|s| s.to_complex())
            }

            pub fn is_exact(&self) -> bool {
                all_exact(&self.c)
            }

            pub fn to_float(&self) -> Self {
                Self { c: self.c.clone().map(|s| s.to_float()) }
            }

            pub fn normalized(&self) -> Self {
                Self { c: normalize_triple(&self.c) }
            }

            /// Max coordinate difference between normalized representatives; 0 means equal.
            pub fn distance(&self, other: &Self) -> f64 {
                triple_distance(&self.c, &other.c)
            }

            /// Projective equality at tolerance `tol`; exact triples compare exactly.
            pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
                if self.is_exact() && other.is_exact() {
                    return cross(&self.c, &other.c).iter().all(Scalar::is_zero);
                }
                self.distance(other) <= tol
            }

            /// True if all coordinates are real after normalization.
            pub fn is_real(&self, tol: f64) -> bool {
                self.normalized().c.iter().all(|s| s.im().abs() <= tol)
            }

            /// Normalized representative with imaginary parts dropped.
            pub fn real_part(&self) -> Self {
                let n = self.normalized();
                if n.is_exact() {
                    return n;
                }
                Self { c: n.c.map(|s| Scalar::real(s.re())) }
            }
        }

        impl PartialEq for $name {
            fn eq(&self, other: &Self) -> bool {
                self.approx_eq(other, tolerance())
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "({} : {} : {})", self.c[0], self.c[1], self.c[2])
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                self.c.serialize(s)
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let c = <[Scalar; 3]>::deserialize(d)?;
                Self::from_array(c).map_err(serde::de::Error::custom)
            }
        }
    };
}

homogeneous_triple!(ProjPoint);
homogeneous_triple!(ProjLine);

impl ProjLine {
    /// Normalized incidence residual |L.p| / (|L| |p|).
    pub fn residual(&self, p: &ProjPoint) -> f64 {
        let v = dot(&self.c, &p.c).abs();
        let nl = self.to_complex().iter().map(|z| z.norm()).fold(0.0, f64::max);
        let np = p.to_complex().iter().map(|z| z.norm()).fold(0.0, f64::max);
        v / (nl * np)
    }

    pub fn contains(&self, p: &ProjPoint, tol: f64) -> bool {
        if self.is_exact() && p.is_exact() {
            return dot(&self.c, &p.c).is_zero();
        }
        self.residual(p) <= tol
    }

    /// Intersection point with another line.
    pub fn meet(&self, other: &ProjLine) -> Result<ProjPoint> {
        let p = cross(&self.c, &other.c);
        if coincident(&self.c, &other.c, &p) {
            return Err(Error::CoincidentPoints);
        }
        ProjPoint::from_array(p)
    }
}

fn coincident(a: &[Scalar; 3], b: &[Scalar; 3], x: &[Scalar; 3]) -> bool {
    if all_exact(x) {
        return x.iter().all(Scalar::is_zero);
    }
    let na = a.iter().map(Scalar::abs).fold(0.0, f64::max);
    let nb = b.iter().map(Scalar::abs).fold(0.0, f64::max);
    let nx = x.iter().map(Scalar::abs).fold(0.0, f64::max);
    nx <= 1e-12 * na * nb
}

/// The line through two distinct points (cross product of representatives).
pub fn line_through(p: &ProjPoint, q: &ProjPoint) -> Result<ProjLine> {
    let l = cross(&p.c, &q.c);
    if coincident(&p.c, &q.c, &l) {
        return Err(Error::CoincidentPoints);
    }
    ProjLine::from_array(l).map(|l| l.normalized())
}

/// An invertible 3x3 matrix acting on column vectors of homogeneous coordinates.
#[derive(Clone, Debug)]
pub struct ProjMap {
    m: [[Scalar; 3]; 3],
}

fn det3(m: &[[Scalar; 3]; 3]) -> Scalar {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
        - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

impl ProjMap {
    /// Rows of the matrix; fails with `SingularMap` if the determinant vanishes.
    pub fn new(m: [[Scalar; 3]; 3]) -> Result<Self> {
        let exact = m.iter().all(|r| all_exact(r));
        if exact {
            if det3(&m).is_zero() {
                return Err(Error::SingularMap);
            }
        } else {
            let scaled: [[Scalar; 3]; 3] = m.clone().map(|row| {
                let n = row.iter().map(Scalar::abs).fold(0.0, f64::max);
                if n == 0.0 {
                    row.map(|_| Scalar::real(0.0))
                } else {
                    row.map(|s| Scalar::Float(s.to_complex() / n))
                }
            });
            let d = det3(&scaled).abs();
            if !(d > 1e-12) {
                return Err(Error::SingularMap);
            }
        }
        Ok(Self { m })
    }

    pub fn from_ints(m: [[i64; 3]; 3]) -> Result<Self> {
        Self::new(m.map(|r| r.map(Scalar::int)))
    }

    pub fn from_complex(m: [[Complex64; 3]; 3]) -> Result<Self> {
        Self::new(m.map(|r| r.map(Scalar::Float)))
    }

    pub fn identity() -> Self {
        Self::from_ints([[1, 0, 0], [0, 1, 0], [0, 0, 1]]).unwrap()
    }

    pub fn diagonal(d: [Scalar; 3]) -> Result<Self> {
        let [a, b, c] = d;
        let z = Scalar::zero;
        Self::new([[a, z(), z()], [z(), b, z()], [z(), z(), c]])
    }

    /// The matrix whose columns are the given vectors.
    pub fn from_columns(cols: [[Scalar; 3]; 3]) -> Result<Self> {
        let m: [[Scalar; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i].clone()));
        Self::new(m)
    }

    pub fn rows(&self) -> &[[Scalar; 3]; 3] {
        &self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        &self.m[i][j]
    }

    pub fn is_exact(&self) -> bool {
        self.m.iter().all(|r| all_exact(r))
    }

    pub fn to_complex(&self) -> [[Complex64; 3]; 3] {
        self.m.clone().map(|r| r.map(|s| s.to_complex()))
    }

    pub fn det(&self) -> Scalar {
        det3(&self.m)
    }

    pub fn transpose(&self) -> ProjMap {
        let m = std::array::from_fn(|i| std::array::from_fn(|j| self.m[j][i].clone()));
        ProjMap { m }
    }

    pub fn inverse(&self) -> ProjMap {
        let m = &self.m;
        let d = self.det();
        let cof = |i: usize, j: usize| {
            let (r0, r1) = match i {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let (c0, c1) = match j {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let minor = &m[r0][c0] * &m[r1][c1] - &m[r0][c1] * &m[r1][c0];
            if (i + j) % 2 == 0 {
                minor
            } else {
                -minor
            }
        };
        // inverse = adjugate / det, adjugate = transpose of cofactors
        let inv = std::array::from_fn(|i| std::array::from_fn(|j| cof(j, i) / &d));
        ProjMap { m: inv }
    }

    /// Matrix product `self * other`, i.e. apply `other` first.
    pub fn compose(&self, other: &ProjMap) -> ProjMap {
        let m = std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..3).map(|k| &self.m[i][k] * &other.m[k][j]).sum())
        });
        ProjMap { m }
    }

    pub fn scaled(&self, s: &Scalar) -> ProjMap {
        ProjMap { m: self.m.clone().map(|r| r.map(|x| &x * s)) }
    }

    pub fn apply_vec(&self, v: &[Scalar; 3]) -> [Scalar; 3] {
        std::array::from_fn(|i| dot(&self.m[i], v))
    }

    /// Image of a point, renormalized.
    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        ProjPoint { c: self.apply_vec(&p.c) }.normalized()
    }

    /// Image of a line: a line L maps to L A^{-1}.
    pub fn apply_line(&self, l: &ProjLine) -> ProjLine {
        let inv = self.inverse();
        let c = std::array::from_fn(|j| (0..3).map(|i| &l.c[i] * &inv.m[i][j]).sum());
        ProjLine { c }.normalized()
    }

    fn flat(&self) -> [Scalar; 9] {
        std::array::from_fn(|k| self.m[k / 3][k % 3].clone())
    }

    /// The matrix divided by its entry of largest modulus (first one on ties).
    pub fn normalized(&self) -> ProjMap {
        let f = self.flat();
        if self.is_exact() {
            let p = f.iter().position(|s| !s.is_zero()).unwrap();
            let d = f[p].clone();
            return self.scaled(&Scalar::one().checked_div(&d).unwrap());
        }
        let mags: Vec<f64> = f.iter().map(Scalar::abs).collect();
        let mx = mags.iter().cloned().fold(0.0, f64::max);
        let p = mags.iter().position(|&x| x >= mx * (1.0 - PIVOT_TIE)).unwrap();
        let d = f[p].to_complex();
        ProjMap { m: self.m.clone().map(|r| r.map(|x| Scalar::Float(x.to_complex() / d))) }
    }

    /// Distance between two maps considered up to a scalar factor.
    pub fn distance(&self, other: &ProjMap) -> f64 {
        let a = self.flat().map(|s| s.to_complex());
        let b = other.flat().map(|s| s.to_complex());
        let one = |a: &[Complex64; 9], b: &[Complex64; 9]| {
            let mx = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let p = (0..9).find(|&i| a[i].norm() >= mx * (1.0 - PIVOT_TIE)).unwrap();
            if b[p].norm() <= 1e-12 * b.iter().map(|z| z.norm()).fold(0.0, f64::max) {
                return f64::INFINITY;
            }
            (0..9).map(|i| (a[i] / a[p] - b[i] / b[p]).norm()).fold(0.0, f64::max)
        };
        one(&a, &b).max(one(&b, &a))
    }

    pub fn approx_eq(&self, other: &ProjMap, tol: f64) -> bool {
        if self.is_exact() && other.is_exact() {
            let a = self.flat();
            let b = other.flat();
            let p = a.iter().position(|s| !s.is_zero()).unwrap();
            if b[p].is_zero() {
                return false;
            }
            return (0..9).all(|i| (&a[i] * &b[p] - &b[i] * &a[p]).is_zero());
        }
        self.distance(other) <= tol
    }

    /// Real up to scale: after normalization every entry has imaginary part below `tol`.
    pub fn is_real(&self, tol: f64) -> bool {
        self.normalized().flat().iter().all(|s| s.im().abs() <= tol)
    }
}

impl PartialEq for ProjMap {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other, tolerance())
    }
}

impl Serialize for ProjMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.m.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = <[[Scalar; 3]; 3]>::deserialize(d)?;
        ProjMap::new(m).map_err(serde::de::Error::custom)
    }
}

/// `A(p)`, the matrix-vector product renormalized.
pub fn apply_map(a: &ProjMap, p: &ProjPoint) -> ProjPoint {
    a.apply(p)
}
