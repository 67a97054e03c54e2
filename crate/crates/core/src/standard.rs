//! Curves y² = x³ + ax + b: reduction from a flex, the J-invariant, triangle shape and
//! automorphism counts.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::proj::dot;
use crate::algebra::{roots_cubic, ProjMap, ProjPoint, Scalar};
use crate::cubic_form::CubicForm;
use crate::error::{Error, Result};

const FLEX_TOL: f64 = 1e-6;
const SHAPE_TOL: f64 = 1e-7;
const SPECIAL_J_TOL: f64 = 1e-7;

/// The affine curve y² = x³ + ax + b, projectively −y²z + x³ + axz² + bz³ = 0.
#[derive(Clone, Debug, Serialize)]
pub struct StandardCurve {
    pub a: Scalar,
    pub b: Scalar,
}

impl StandardCurve {
    pub fn new(a: Scalar, b: Scalar) -> Self {
        Self { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        Self::new(Scalar::int(a), Scalar::int(b))
    }

    pub fn is_exact(&self) -> bool {
        self.a.is_exact() && self.b.is_exact()
    }

    fn terms(&self) -> (Scalar, Scalar) {
        (Scalar::int(4) * self.a.powi(3), Scalar::int(27) * self.b.square())
    }

    /// −(4a³ + 27b²)
    pub fn discriminant(&self) -> Scalar {
        let (t1, t2) = self.terms();
        -(t1 + t2)
    }

    /// 4a³ + 27b² ≠ 0; for floats, nonzero relative to the two terms (1e-12).
    pub fn is_smooth(&self) -> bool {
        let (t1, t2) = self.terms();
        let d = &t1 + &t2;
        if d.is_exact() {
            return !d.is_zero();
        }
        if t1.is_zero() && t2.is_zero() {
            return false;
        }
        d.abs() > 1e-12 * (t1.abs() + t2.abs())
    }

    fn require_smooth(&self) -> Result<()> {
        if self.is_smooth() {
            Ok(())
        } else {
            Err(Error::SingularCurve)
        }
    }

    /// Roots of x³ + ax + b.
    pub fn roots(&self) -> [Scalar; 3] {
        roots_cubic(&Scalar::one(), &Scalar::zero(), &self.a, &self.b).expect("monic")
    }

    pub fn j_invariant(&self) -> Result<Scalar> {
        self.require_smooth()?;
        let (t1, t2) = self.terms();
        Ok(&t1 / &(&t1 + &t2))
    }

    /// −y²z + x³ + axz² + bz³
    pub fn to_form(&self) -> CubicForm {
        let mut c: [Scalar; 10] = std::array::from_fn(|_| Scalar::zero());
        c[0] = Scalar::one();
        c[5] = self.a.clone();
        c[7] = Scalar::int(-1);
        c[9] = self.b.clone();
        CubicForm::new(c).unwrap()
    }

    /// The affine point (x, y) as (x : y : 1).
    pub fn point(&self, x: Scalar, y: Scalar) -> ProjPoint {
        ProjPoint::new(x, y, Scalar::one()).unwrap()
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.a.is_real(tol) && self.b.is_real(tol)
    }
}

impl fmt::Display for StandardCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + ({})x + ({})", self.a, self.b)
    }
}

pub fn j_invariant(c: &StandardCurve) -> Result<Scalar> {
    c.j_invariant()
}

/// (a, b) ↦ (t⁴a, t⁶b), from X = t²x, Y = t³y.
pub fn rescale(c: &StandardCurve, t: &Scalar) -> Result<StandardCurve> {
    if t.is_zero() {
        return Err(Error::ZeroScale);
    }
    Ok(StandardCurve::new(t.powi(4) * &c.a, t.powi(6) * &c.b))
}

fn cross(a: &[Scalar; 3], b: &[Scalar; 3]) -> [Scalar; 3] {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn max_abs(v: &[Scalar]) -> f64 {
    v.iter().map(Scalar::abs).fold(0.0, f64::max)
}

fn is_negligible(s: &Scalar, scale: f64) -> bool {
    if s.is_exact() {
        s.is_zero()
    } else {
        s.abs() <= FLEX_TOL * scale
    }
}

/// Pulls Φ back along `m` and rescales so the x³ coefficient is 1.
fn pull_monic(phi: &CubicForm, m: &ProjMap) -> Result<CubicForm> {
    let psi = phi.pullback(m);
    let lead = psi.coeff([3, 0, 0]).clone();
    if lead.is_zero() || (!lead.is_exact() && lead.abs() <= 1e-12 * psi.max_coeff()) {
        return Err(Error::SingularCurve);
    }
    Ok(psi.scaled(&Scalar::one().checked_div(&lead)?))
}

/// Reduction to y² = x³ + ax + b with the given flex sent to (0:1:0) and its tangent to z = 0.
///
/// Returns (a, b) and A with transform(Φ, A) ∝ −y²z + x³ + axz² + bz³. All four steps run
/// in exact arithmetic when Φ and the flex are exact.
pub fn to_standard(phi: &CubicForm, flex: &ProjPoint) -> Result<(StandardCurve, ProjMap)> {
    let p = flex.normalized();
    let pv = p.coords().clone();
    let scale = phi.max_coeff();
    let tangent = phi.tangent_line(&p)?;
    let l = tangent.coords().clone();

    // a second point on the tangent, as far from p as possible
    let q = (0..3)
        .map(|i| {
            let mut e: [Scalar; 3] = std::array::from_fn(|_| Scalar::zero());
            e[i] = Scalar::one();
            cross(&l, &e)
        })
        .filter(|q| !q.iter().all(Scalar::is_zero))
        .max_by(|a, b| {
            let score = |q: &[Scalar; 3]| max_abs(&cross(q, &pv)) / max_abs(q);
            score(a).partial_cmp(&score(b)).unwrap()
        })
        .ok_or(Error::SingularAtFlex)?;

    let on_curve = phi.eval_vec(&pv);
    let c2 = dot(&phi.gradient_vec(&q), &pv);
    let qn = max_abs(&q);
    if !is_negligible(&on_curve, scale) || !is_negligible(&c2, scale * qn * qn) {
        let r = on_curve.abs().max(c2.abs() / (qn * qn)) / scale;
        return Err(Error::NotAFlex(r));
    }

    let j = (0..3)
        .max_by(|&a, &b| l[a].abs().partial_cmp(&l[b].abs()).unwrap())
        .unwrap();
    let mut r: [Scalar; 3] = std::array::from_fn(|_| Scalar::zero());
    r[j] = Scalar::one();

    // Step 1: (1:0:0) ↦ q, (0:1:0) ↦ p, (0:0:1) ↦ r
    let b = ProjMap::from_columns([q, pv, r]).map_err(|_| Error::SingularAtFlex)?;
    let psi = pull_monic(phi, &b)?;

    // Step 2: x ↦ αx, y ↦ αy with α = −d makes the y²z coefficient −1
    let d = psi.coeff([0, 2, 1]).clone();
    if d.is_zero() || (!d.is_exact() && d.abs() <= 1e-12) {
        return Err(Error::SingularAtFlex);
    }
    let alpha = -d;
    let s = ProjMap::diagonal([alpha.clone(), alpha, Scalar::one()])?;
    let m = b.compose(&s);
    let psi = pull_monic(phi, &m)?;

    // Step 3: y ↦ y + (s·x + t·z)/2 removes xyz and yz²
    let half = Scalar::ratio(1, 2);
    let sx = psi.coeff([1, 1, 1]) * &half;
    let tz = psi.coeff([0, 1, 2]) * &half;
    let (o, z) = (Scalar::one, Scalar::zero);
    let t3 = ProjMap::new([[o(), z(), z()], [sx, o(), tz], [z(), z(), o()]])?;
    let m = m.compose(&t3);
    let psi = pull_monic(phi, &m)?;

    // Step 4: x ↦ x − (p′/3)·z removes x²z
    let shift = -(psi.coeff([2, 0, 1]) * &Scalar::ratio(1, 3));
    let t4 = ProjMap::new([[o(), z(), shift], [z(), o(), z()], [z(), z(), o()]])?;
    let m = m.compose(&t4);
    let psi = pull_monic(phi, &m)?;

    let curve = StandardCurve::new(psi.coeff([1, 0, 2]).clone(), psi.coeff([0, 0, 3]).clone());
    Ok((curve, m.inverse()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeTag {
    Equilateral,
    Isosceles,
    CollinearWithMidpoint,
    Collinear,
    GenericUpper,
    GenericLower,
}

impl fmt::Display for ShapeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ShapeTag::Equilateral => "equilateral",
            ShapeTag::Isosceles => "isosceles",
            ShapeTag::CollinearWithMidpoint => "collinear-with-midpoint",
            ShapeTag::Collinear => "collinear",
            ShapeTag::GenericUpper => "generic-upper",
            ShapeTag::GenericLower => "generic-lower",
        };
        f.write_str(s)
    }
}

/// The triangle of roots of x³ + ax + b, up to complex affine maps.
#[derive(Clone, Debug, Serialize)]
pub struct TriangleShape {
    pub vertices: [Complex64; 3],
    /// Edge lengths sorted ascending.
    pub edges: [f64; 3],
    pub tag: ShapeTag,
}

/// Classifies the root triangle.
///
/// For a scalene, non-degenerate triangle the tag records whether the edges, read in
/// counter-clockwise order around the triangle, come in the cyclic order e₁, e₂, e₃
/// (`GenericUpper`, Im J > 0) or the reverse (`GenericLower`, Im J < 0).
pub fn triangle_shape(c: &StandardCurve) -> Result<TriangleShape> {
    c.require_smooth()?;
    let v = c.roots().map(|r| r.to_complex());
    Ok(classify_triangle(v))
}

pub fn classify_triangle(v: [Complex64; 3]) -> TriangleShape {
    // edge i is opposite vertex i
    let len = [(v[1] - v[2]).norm(), (v[2] - v[0]).norm(), (v[0] - v[1]).norm()];
    let mut edges = len;
    edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let [e1, e2, e3] = edges;
    let close = |a: f64, b: f64| (a - b).abs() <= SHAPE_TOL * e3;
    let area2 = ((v[1] - v[0]).conj() * (v[2] - v[0])).im;
    let tag = if close(e1, e3) {
        ShapeTag::Equilateral
    } else if area2.abs() <= SHAPE_TOL * e3 * e3 {
        if close(e1, e2) {
            ShapeTag::CollinearWithMidpoint
        } else {
            ShapeTag::Collinear
        }
    } else if close(e1, e2) || close(e2, e3) {
        ShapeTag::Isosceles
    } else {
        // walk the vertices counter-clockwise and read off the rank of each edge met
        let order: [usize; 3] = if area2 > 0.0 { [0, 1, 2] } else { [0, 2, 1] };
        let rank = |i: usize| {
            let mut idx = [0usize, 1, 2];
            idx.sort_by(|&a, &b| len[a].partial_cmp(&len[b]).unwrap());
            idx.iter().position(|&k| k == i).unwrap()
        };
        // edge from order[k] to order[k+1] is opposite the remaining vertex
        let ranks: Vec<usize> = (0..3).map(|k| rank(3 - order[k] - order[(k + 1) % 3])).collect();
        let ascending = (0..3).all(|k| (ranks[k] + 1) % 3 == ranks[(k + 1) % 3]);
        if ascending {
            ShapeTag::GenericUpper
        } else {
            ShapeTag::GenericLower
        }
    };
    TriangleShape { vertices: v, edges, tag }
}

/// (order of the projective automorphism group, order of the stabilizer of a flex):
/// (54, 6) for J = 0, (36, 4) for J = 1, otherwise (18, 2).
pub fn automorphism_order(c: &StandardCurve) -> Result<(u32, u32)> {
    let j = c.j_invariant()?;
    let stab = if j.is_exact() {
        if j.is_zero() {
            6
        } else if j == Scalar::one() {
            4
        } else {
            2
        }
    } else if j.abs() < SPECIAL_J_TOL {
        6
    } else if (j.to_complex() - 1.0).norm() < SPECIAL_J_TOL {
        4
    } else {
        2
    };
    Ok((9 * stab, stab))
}
