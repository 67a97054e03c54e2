//! Lattices Ω ⊂ ℂ: Eisenstein invariants g₂, g₃, the associated standard curve, and the
//! Voronoi cell of the origin.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::Scalar;
use crate::error::{Error, Result};
use crate::standard::StandardCurve;

const DEGENERACY_TOL: f64 = 1e-9;
const SYMMETRY_TOL: f64 = 1e-6;
const MAX_TERMS: usize = 10_000;

/// Lattice ℤω₁ + ℤω₂, stored with Im(ω₂/ω₁) > 0.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Lattice {
    w1: Complex64,
    w2: Complex64,
}

impl Lattice {
    pub fn new(w1: Complex64, w2: Complex64) -> Result<Self> {
        if !(w1.is_finite() && w2.is_finite()) || w1.norm() == 0.0 {
            return Err(Error::DegenerateLattice);
        }
        let tau = w2 / w1;
        if !(tau.im.abs() > DEGENERACY_TOL) {
            return Err(Error::DegenerateLattice);
        }
        let w2 = if tau.im < 0.0 { -w2 } else { w2 };
        Ok(Self { w1, w2 })
    }

    /// ℤ + τℤ
    pub fn from_tau(tau: Complex64) -> Result<Self> {
        Self::new(Complex64::new(1.0, 0.0), tau)
    }

    pub fn square() -> Self {
        Self::from_tau(Complex64::new(0.0, 1.0)).unwrap()
    }

    pub fn hexagonal() -> Self {
        Self::from_tau(Complex64::from_polar(1.0, PI / 3.0)).unwrap()
    }

    pub fn generators(&self) -> (Complex64, Complex64) {
        (self.w1, self.w2)
    }

    pub fn tau(&self) -> Complex64 {
        self.w2 / self.w1
    }

    pub fn scaled(&self, lambda: Complex64) -> Result<Self> {
        Self::new(self.w1 * lambda, self.w2 * lambda)
    }

    /// Area of a fundamental parallelogram.
    pub fn covolume(&self) -> f64 {
        (self.w1.conj() * self.w2).im.abs()
    }

    /// Gauss-reduced basis (u, v): |u| ≤ |v|, |Re(v/u)| ≤ 1/2, Im(v/u) > 0.
    pub fn reduced(&self) -> (Complex64, Complex64) {
        let (mut u, mut v) = (self.w1, self.w2);
        if v.norm() < u.norm() {
            std::mem::swap(&mut u, &mut v);
        }
        for _ in 0..200 {
            let mu = (v * u.conj()).re / u.norm_sqr();
            v -= u * mu.round();
            if v.norm() < u.norm() * (1.0 - 1e-15) {
                std::mem::swap(&mut u, &mut v);
            } else {
                break;
            }
        }
        if (v / u).im < 0.0 {
            v = -v;
        }
        (u, v)
    }

    /// Whether `w` is a lattice vector (integer coordinates within `tol`).
    pub fn contains(&self, w: Complex64, tol: f64) -> bool {
        let det = (self.w1.conj() * self.w2).im;
        let m = (w.conj() * self.w2).im / det;
        let n = (self.w1.conj() * w).im / det;
        (m - m.round()).abs() <= tol && (n - n.round()).abs() <= tol
    }
}

/// Σ_{r≥1} r^{p} q^r / (1 − q^r), truncated once terms drop below 1e-18 relative.
fn lambert(q: Complex64, p: i32, max_terms: usize) -> (Complex64, usize) {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut qr = Complex64::new(1.0, 0.0);
    for r in 1..=max_terms {
        qr *= q;
        let term = (r as f64).powi(p) * qr / (1.0 - qr);
        sum += term;
        if term.norm() <= 1e-18 * (1.0 + sum.norm()) {
            return (sum, r);
        }
    }
    (sum, max_terms)
}

/// (g₂, g₃) of ℤ + τℤ using at most `terms` terms of each q-series, with Im τ > 0.
pub fn eisenstein_tau(tau: Complex64, terms: usize) -> (Complex64, Complex64, usize) {
    let q = Complex64::from_polar((-2.0 * PI * tau.im).exp(), 2.0 * PI * tau.re);
    let (s3, n3) = lambert(q, 3, terms);
    let (s5, n5) = lambert(q, 5, terms);
    // G₄ = (π⁴/45)(1 + 240 Σσ₃(n)qⁿ),  G₆ = (2π⁶/945)(1 − 504 Σσ₅(n)qⁿ)
    let g4 = PI.powi(4) / 45.0 * (1.0 + 240.0 * s3);
    let g6 = 2.0 * PI.powi(6) / 945.0 * (1.0 - 504.0 * s5);
    (60.0 * g4, 140.0 * g6, n3.max(n5))
}

/// g₂ = 60 Σ' ω⁻⁴ and g₃ = 140 Σ' ω⁻⁶ over the nonzero lattice vectors.
///
/// Evaluated on the reduced basis (u, v) as u⁻⁴ and u⁻⁶ times the q-expansions in
/// τ = v/u, where |q| ≤ e^{−π√3} makes the series converge geometrically.
pub fn eisenstein(lattice: &Lattice) -> (Scalar, Scalar) {
    let (g2, g3) = eisenstein_complex(lattice);
    (Scalar::Float(g2), Scalar::Float(g3))
}

pub fn eisenstein_complex(lattice: &Lattice) -> (Complex64, Complex64) {
    eisenstein_truncated(lattice, MAX_TERMS).0
}

/// Like [`eisenstein`] with a cap on the series length; also reports the terms used.
pub fn eisenstein_truncated(lattice: &Lattice, terms: usize) -> ((Complex64, Complex64), usize) {
    let (u, v) = lattice.reduced();
    let (g2, g3, n) = eisenstein_tau(v / u, terms);
    ((g2 / u.powi(4), g3 / u.powi(6)), n)
}

/// Y² = 4X³ − g₂X − g₃ rescaled to y² = x³ + ax + b with a = −g₂/4, b = −g₃/4.
pub fn lattice_to_curve(lattice: &Lattice) -> Result<StandardCurve> {
    let (g2, g3) = eisenstein_complex(lattice);
    let (a, b) = (-g2 / 4.0, -g3 / 4.0);
    let (t1, t2) = (4.0 * a.powu(3), 27.0 * b * b);
    if (t1 + t2).norm() < 1e-12 * (t1.norm() + t2.norm()) {
        return Err(Error::NumericalSingularity);
    }
    Ok(StandardCurve::new(Scalar::Float(a), Scalar::Float(b)))
}

/// The Voronoi cell V₀ of the origin: a centrally symmetric hexagon or rectangle.
#[derive(Clone, Debug, Serialize)]
pub struct VoronoiCell {
    /// Vertices in counter-clockwise order.
    pub vertices: Vec<Complex64>,
}

impl VoronoiCell {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edges(&self) -> Vec<(Complex64, Complex64)> {
        let n = self.vertices.len();
        (0..n).map(|i| (self.vertices[i], self.vertices[(i + 1) % n])).collect()
    }

    pub fn area(&self) -> f64 {
        self.edges().iter().map(|(a, b)| (a.conj() * b).im).sum::<f64>() / 2.0
    }

    /// Images of 0 under reflection in each edge line.
    pub fn reflections_of_origin(&self) -> Vec<Complex64> {
        self.edges()
            .iter()
            .map(|(a, b)| {
                let d = b - a;
                let t = -(a * d.conj()).re / d.norm_sqr();
                2.0 * (a + d * t)
            })
            .collect()
    }

    fn scale(&self) -> f64 {
        self.vertices.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Whether rotation by `angle` maps the vertex set onto itself.
    pub fn invariant_under_rotation(&self, angle: f64) -> bool {
        let rot = Complex64::from_polar(1.0, angle);
        let tol = SYMMETRY_TOL * self.scale();
        self.vertices
            .iter()
            .all(|v| self.vertices.iter().any(|w| (v * rot - w).norm() <= tol))
    }
}

fn clip(poly: &[Complex64], w: Complex64) -> Vec<Complex64> {
    let c = w.norm_sqr() / 2.0;
    let f = |z: Complex64| (z * w.conj()).re - c;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
        let (fa, fb) = (f(a), f(b));
        if fa <= 0.0 {
            out.push(a);
        }
        if (fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0) {
            out.push(a + (b - a) * (fa / (fa - fb)));
        }
    }
    out
}

fn simplify(poly: Vec<Complex64>, tol: f64) -> Vec<Complex64> {
    let mut pts: Vec<Complex64> = Vec::new();
    for p in poly {
        if pts.last().is_none_or(|q: &Complex64| (p - q).norm() > tol) {
            pts.push(p);
        }
    }
    while pts.len() > 1 && (pts[0] - pts[pts.len() - 1]).norm() <= tol {
        pts.pop();
    }
    // drop vertices where the boundary does not turn
    loop {
        let n = pts.len();
        let idx = (0..n).find(|&i| {
            let (a, b, c) = (pts[(i + n - 1) % n], pts[i], pts[(i + 1) % n]);
            ((b - a).conj() * (c - b)).im.abs() <= tol * ((b - a).norm() + (c - b).norm())
        });
        match idx {
            Some(i) if n > 3 => {
                pts.remove(i);
            }
            _ => break,
        }
    }
    pts
}

/// Intersection of the half-planes Re(z·w̄) ≤ |w|²/2 for w = ±u, ±v, ±(u+v), ±(u−v)
/// on a reduced basis.
pub fn voronoi_cell(lattice: &Lattice) -> VoronoiCell {
    let (u, v) = lattice.reduced();
    let r = 2.0 * (u.norm() + v.norm());
    let mut poly = vec![
        Complex64::new(-r, -r),
        Complex64::new(r, -r),
        Complex64::new(r, r),
        Complex64::new(-r, r),
    ];
    for w in [u, v, u + v, u - v] {
        poly = clip(&poly, w);
        poly = clip(&poly, -w);
    }
    let tol = 1e-12 * v.norm();
    let mut vertices = simplify(poly, tol);
    // start at the vertex with the smallest argument for a stable presentation
    if let Some(start) = (0..vertices.len()).min_by(|&a, &b| {
        let key = |z: Complex64| {
            let t = z.arg();
            if t < -1e-12 {
                t + 2.0 * PI
            } else {
                t.max(0.0)
            }
        };
        key(vertices[a]).partial_cmp(&key(vertices[b])).unwrap()
    }) {
        vertices.rotate_left(start);
    }
    VoronoiCell { vertices }
}

/// Order of the rotation group of V₀: 6 (regular hexagon), 4 (square) or 2.
pub fn torus_symmetry_order(lattice: &Lattice) -> u32 {
    let cell = voronoi_cell(lattice);
    for n in [6u32, 4] {
        if cell.invariant_under_rotation(2.0 * PI / n as f64) {
            return n;
        }
    }
    2
}
