//! Real cubics: real flexes, components, the real Hesse parameter, canonical affine
//! pictures and the cross-ratio χ.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::scalar::sign_of;
use crate::algebra::{ProjMap, ProjPoint, Scalar};
use crate::contour::{self, Grid, Pt};
use crate::cubic_form::{exact_flex, find_flexes, CubicForm};
use crate::error::{Error, Result};
use crate::hesse::{symmetry_group, to_hesse};
use crate::standard::{to_standard, StandardCurve};

const REAL_TOL: f64 = 1e-9;
const REAL_FLEX_TOL: f64 = 1e-6;
const SIGN_TOL: f64 = 1e-9;

fn sqrt3() -> f64 {
    3f64.sqrt()
}

#[derive(Clone, Debug, Serialize)]
pub struct RealClassification {
    /// The unique real k ≠ 1 with Φ ≅ Φ_k over ℝ.
    pub k: Scalar,
    #[serde(rename = "J")]
    pub j: Scalar,
    pub sign_b: i8,
    pub sign_a: i8,
    pub components: u8,
    pub real_flexes: Vec<ProjPoint>,
    /// The real standard form used to read the invariants.
    pub standard: StandardCurve,
}

/// Real part of the normalized form, or ComplexCoefficients.
fn realify(phi: &CubicForm) -> Result<CubicForm> {
    if !phi.is_real(REAL_TOL) {
        return Err(Error::ComplexCoefficients);
    }
    if phi.is_exact() {
        return Ok(phi.clone());
    }
    let n = phi.normalized();
    CubicForm::new(n.coeffs().clone().map(|c| Scalar::real(c.re())))
}

/// The three flexes fixed by complex conjugation.
pub fn real_flexes(phi: &CubicForm) -> Result<Vec<ProjPoint>> {
    let phi = realify(phi)?;
    let flexes = find_flexes(&phi)?;
    let out: Vec<ProjPoint> = flexes
        .iter()
        .map(|f| f.point.normalized())
        .filter(|p| p.is_real(REAL_FLEX_TOL))
        .map(|p| p.real_part())
        .collect();
    if out.len() != 3 {
        return Err(Error::ConvergenceFailure(format!("{} real flexes", out.len())));
    }
    Ok(out)
}

fn real_standard(phi: &CubicForm, flex: &ProjPoint) -> Result<StandardCurve> {
    let (c, _) = match exact_flex(phi, flex).map(|q| to_standard(phi, &q)) {
        Some(Ok(r)) => r,
        _ => to_standard(phi, flex)?,
    };
    if c.is_exact() {
        return Ok(c);
    }
    if !c.is_real(1e-7) {
        return Err(Error::ConvergenceFailure("standard form is not real".into()));
    }
    Ok(StandardCurve::new(Scalar::real(c.a.re()), Scalar::real(c.b.re())))
}

/// Signs of (a, b) with floats near zero (relative to the weight-balanced scale) read as 0.
fn signs(c: &StandardCurve) -> (i8, i8) {
    if c.is_exact() {
        return (sign_of(&c.a), sign_of(&c.b));
    }
    let (a, b) = (c.a.re(), c.b.re());
    let (wa, wb) = (a.abs().powf(1.5), b.abs());
    let scale = wa.max(wb);
    let sa = if wa <= SIGN_TOL * scale { 0 } else { a.signum() as i8 };
    let sb = if wb <= SIGN_TOL * scale { 0 } else { b.signum() as i8 };
    (sa, sb)
}

/// 1 if x³+ax+b has one real root, 2 if it has three.
pub fn count_components(c: &StandardCurve) -> Result<u8> {
    if !c.is_real(REAL_TOL) {
        return Err(Error::ComplexCoefficients);
    }
    if !c.is_smooth() {
        return Err(Error::SingularCurve);
    }
    Ok(if sign_of(&c.discriminant()) > 0 { 2 } else { 1 })
}

/// The real k on the branch fixed by (components, sign b, sign a) with J(k) = J.
fn real_k(j: f64, components: u8, sign_b: i8, sign_a: i8) -> Result<f64> {
    let s3 = sqrt3();
    if sign_b == 0 {
        return Ok(if sign_a < 0 { 1.0 + s3 } else { 1.0 - s3 });
    }
    let (lo, hi) = match (components, sign_b > 0) {
        (1, true) => (f64::NEG_INFINITY, 1.0 - s3),
        (1, false) => (1.0 - s3, 1.0),
        (_, false) => (1.0, 1.0 + s3),
        (_, true) => (1.0 + s3, f64::INFINITY),
    };
    // k(k³+8)/(4(k³−1)) is real for real k, so it equals the real cube root R of J:
    // k⁴ − 4Rk³ + 8k + 4R = 0.
    let r = j.cbrt();
    let quartic = [1.0, -4.0 * r, 0.0, 8.0, 4.0 * r].map(|c| Complex64::new(c, 0.0));
    let roots = crate::algebra::poly::roots(&quartic)?;
    let dist = |z: &Complex64| {
        let x = z.re;
        let out = if x < lo { lo - x } else if x > hi { x - hi } else { 0.0 };
        out + z.im.abs()
    };
    let best = roots
        .iter()
        .min_by(|a, b| dist(a).total_cmp(&dist(b)))
        .ok_or_else(|| Error::ConvergenceFailure("no quartic roots".into()))?;
    let mut k = best.re.clamp(lo.max(-1e300), hi.min(1e300));
    let f = |k: f64| ((k * k - 4.0 * r * k) * k) * k + 8.0 * k + 4.0 * r;
    let df = |k: f64| (4.0 * k - 12.0 * r) * k * k + 8.0;
    for _ in 0..8 {
        let d = df(k);
        if d == 0.0 {
            break;
        }
        let next = k - f(k) / d;
        if !next.is_finite() || (next - k).abs() > 0.5 * (1.0 + k.abs()) {
            break;
        }
        k = next;
    }
    Ok(k)
}

/// Real flex, real standard form, J and signs, then the real k on the right branch.
pub fn classify_real(phi: &CubicForm) -> Result<RealClassification> {
    let phi = realify(phi)?;
    let flexes = real_flexes(&phi)?;
    let standard = real_standard(&phi, &flexes[0])?;
    let components = count_components(&standard)?;
    let j = standard.j_invariant()?;
    let (sign_a, sign_b) = signs(&standard);
    let k = real_k(j.re(), components, sign_b, sign_a)?;
    let k = if sign_b == 0 { Scalar::real(k) } else { exact_k(&j, k).unwrap_or(Scalar::real(k)) };
    Ok(RealClassification { k, j, sign_b, sign_a, components, real_flexes: flexes, standard })
}

/// A small-denominator rational k reproducing an exact J, if there is one near the float root.
fn exact_k(j: &Scalar, k: f64) -> Option<Scalar> {
    if !j.is_exact() {
        return None;
    }
    for den in 1..=64i64 {
        let num = (k * den as f64).round();
        if (num / den as f64 - k).abs() > 1e-9 || num.abs() > 1e12 {
            continue;
        }
        let cand = Scalar::ratio(num as i64, den);
        if let Ok(jj) = crate::hesse::j_of_k(&crate::hesse::HesseParam::Finite(cand.clone())) {
            if (&jj - j).is_zero() {
                return Some(cand);
            }
        }
    }
    None
}

#[derive(Clone, Debug, Serialize)]
pub struct RealAutomorphism {
    pub map: ProjMap,
    /// Image index of each real flex: map(f_i) = f_{permutation[i]}.
    pub permutation: [usize; 3],
}

/// The six real projective automorphisms, identity first, then by permutation.
pub fn real_automorphisms(phi: &CubicForm) -> Result<Vec<RealAutomorphism>> {
    let phi = realify(phi)?;
    let flexes = real_flexes(&phi)?;
    let (_, a) = to_hesse(&phi, false)?;
    let a_inv = a.inverse();
    let mut out = Vec::new();
    for s in symmetry_group() {
        let t = a_inv.compose(&s.map).compose(&a).normalized();
        if !t.is_real(1e-6) {
            continue;
        }
        let rows = t.to_complex().map(|r| r.map(|z| Scalar::real(z.re)));
        let t = ProjMap::new(rows)?.normalized();
        let mut perm = [0usize; 3];
        for (i, f) in flexes.iter().enumerate() {
            let img = t.apply(f);
            perm[i] = flexes
                .iter()
                .position(|g| g.distance(&img) < 1e-6)
                .ok_or_else(|| Error::ConvergenceFailure("automorphism moves a real flex off the set".into()))?;
        }
        out.push(RealAutomorphism { map: t, permutation: perm });
    }
    if out.len() != 6 {
        return Err(Error::ConvergenceFailure(format!("{} real automorphisms", out.len())));
    }
    out.sort_by_key(|r| r.permutation);
    Ok(out)
}

/// A line {p + t·d}.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Line2 {
    pub point: Pt,
    pub direction: Pt,
}

/// A real Hesse curve placed with its real flexes at infinity, centre of symmetry at the
/// origin and (0, 1) on the essential component. The curve is
/// c2·(X²+Y²) + c3·(3X²Y − Y³) + c0 = 0.
#[derive(Clone, Debug, Serialize)]
pub struct CanonicalPicture {
    /// None for k = ∞.
    pub k: Option<f64>,
    /// Hesse coordinates (x : y : z) ↦ chart coordinates (X : Y : 1).
    pub chart: ProjMap,
    /// The essential Y-axis crossing before rescaling.
    pub scale: f64,
    pub c2: f64,
    pub c3: f64,
    pub c0: f64,
    pub asymptotes: Vec<Line2>,
    pub isolated_points: Vec<Pt>,
    pub branches: Vec<Vec<Pt>>,
    pub window: f64,
}

impl CanonicalPicture {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.c2 * (x * x + y * y) + self.c3 * (3.0 * x * x * y - y * y * y) + self.c0
    }
}

/// Real roots of the chart curve on the Y-axis: (k−1)/√3·Y³ + (k+2)Y² − 4(k−1)/9.
fn essential_root(k: f64) -> f64 {
    let c = [(k - 1.0) / sqrt3(), k + 2.0, 0.0, -4.0 * (k - 1.0) / 9.0].map(|v| Complex64::new(v, 0.0));
    let mut re: Vec<f64> = crate::algebra::poly::roots(&c)
        .unwrap_or_default()
        .into_iter()
        .filter(|z| z.im.abs() < 1e-7 * (1.0 + z.re.abs()))
        .map(|z| z.re)
        .collect();
    re.sort_by(f64::total_cmp);
    match re.len() {
        3 => {
            // two of them are where the oval around the origin crosses the axis
            if re[0] < 0.0 && 0.0 < re[1] {
                re[2]
            } else {
                re[0]
            }
        }
        _ => re[0],
    }
}

/// The canonical affine picture for real k; k = 1 and k = ±∞ give the limit pictures.
pub fn canonical_picture(k: Option<f64>, window: f64, grid: usize) -> CanonicalPicture {
    let s3 = sqrt3();
    let k = k.filter(|v| v.is_finite() && v.abs() < 1e12);
    let (scale, c2, c3, c0, offset, isolated) = match k {
        None => {
            let l = 1.0 / s3;
            (l, 1.0 / 3.0, -1.0 / 9.0, -4.0 / 9.0, 1.0, vec![])
        }
        Some(k) if (k - 1.0).abs() < 1e-12 => (f64::INFINITY, 1.0, 1.0, 0.0, -1.0 / 3.0, vec![(0.0, 0.0)]),
        Some(k) => {
            let l = essential_root(k);
            let c2 = (k + 2.0) * l * l;
            let c3 = -(k - 1.0) * l.powi(3) / s3;
            let c0 = -4.0 * (k - 1.0) / 9.0;
            let m = c2.abs().max(c3.abs()).max(c0.abs());
            let off = (k + 2.0) / (s3 * (k - 1.0)) / l;
            (l, c2 / m, c3 / m, c0 / m, off, vec![])
        }
    };
    let w = if scale.is_finite() { scale } else { 1.0 };
    let chart = ProjMap::new([
        [Scalar::real(1.0), Scalar::real(-1.0), Scalar::real(0.0)],
        [Scalar::real(1.0 / s3), Scalar::real(1.0 / s3), Scalar::real(-2.0 / s3)],
        [Scalar::real(w), Scalar::real(w), Scalar::real(w)],
    ])
    .expect("invertible chart");
    let asymptotes = (0..3)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / 3.0;
            let (s, c) = t.sin_cos();
            // rotate the horizontal line Y = offset
            Line2 { point: (-s * offset, c * offset), direction: (c, s) }
        })
        .collect();
    let mut pic = CanonicalPicture {
        k,
        chart,
        scale,
        c2,
        c3,
        c0,
        asymptotes,
        isolated_points: isolated,
        branches: vec![],
        window,
    };
    let segs = contour::segments(|x, y| pic.eval(x, y), &Grid::square(window, grid));
    pic.branches = contour::polylines(&segs);
    pic
}

/// χ = (r₂ − r₃)/(r₁ − r₂) for the real roots r₁ > r₂ > r₃ of x³ + ax + b.
pub fn cross_ratio_chi(c: &StandardCurve) -> Result<Scalar> {
    if count_components(c)? != 2 {
        return Err(Error::OneComponent);
    }
    let mut r: Vec<f64> = c.roots().iter().map(Scalar::re).collect();
    r.sort_by(|a, b| b.total_cmp(a));
    Ok(Scalar::real((r[1] - r[2]) / (r[0] - r[1])))
}
