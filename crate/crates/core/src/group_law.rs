//! The chord-tangent map p*q and the additive group p + q = (p*q)*o on a smooth cubic.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::algebra::proj::dot;
use crate::algebra::{ProjPoint, Scalar};
use crate::cubic_form::{find_flexes, CubicForm};
use crate::error::{Error, Result};

/// Membership tolerance for floating points (normalized residual).
pub const MEMBERSHIP_TOL: f64 = 1e-9;
/// Points closer than this are treated as equal, so the tangent is used.
const COINCIDENCE_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct CurvePoint {
    curve: Arc<CubicForm>,
    point: ProjPoint,
}

impl CurvePoint {
    pub fn new(curve: Arc<CubicForm>, point: ProjPoint) -> Result<Self> {
        let point = point.normalized();
        if curve.is_exact() && point.is_exact() {
            if !curve.evaluate(&point).is_zero() {
                return Err(Error::NotOnCurve(curve.residual(&point)));
            }
        } else {
            let r = curve.residual(&point);
            if !(r < MEMBERSHIP_TOL) {
                return Err(Error::NotOnCurve(r));
            }
        }
        Ok(Self { curve, point })
    }

    pub fn point(&self) -> &ProjPoint {
        &self.point
    }

    pub fn curve(&self) -> &Arc<CubicForm> {
        &self.curve
    }

    pub fn is_exact(&self) -> bool {
        self.point.is_exact() && self.curve.is_exact()
    }

    pub fn distance(&self, other: &CurvePoint) -> f64 {
        self.point.distance(&other.point)
    }

    /// Exact equality for exact points, otherwise projective distance within `tol`.
    pub fn approx_eq(&self, other: &CurvePoint, tol: f64) -> bool {
        self.point.approx_eq(&other.point, tol)
    }

    fn same_curve(&self, other: &CurvePoint) -> bool {
        Arc::ptr_eq(&self.curve, &other.curve) || self.curve.approx_eq(&other.curve, 1e-12)
    }
}

impl Serialize for CurvePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.point.serialize(s)
    }
}

fn coincide(p: &ProjPoint, q: &ProjPoint) -> bool {
    if p.is_exact() && q.is_exact() {
        p.approx_eq(q, 0.0)
    } else {
        p.distance(q) < COINCIDENCE_TOL
    }
}

fn scale_of(v: &[Scalar]) -> f64 {
    v.iter().map(Scalar::abs).fold(0.0, f64::max)
}

/// Both entries vanish: the whole line lies on the curve.
fn both_vanish(a: &Scalar, b: &Scalar, scale: f64) -> bool {
    if a.is_exact() && b.is_exact() {
        a.is_zero() && b.is_zero()
    } else {
        a.abs().max(b.abs()) <= 1e-12 * scale
    }
}

/// One Newton step along the conjugate gradient to remove rounding drift off the curve.
fn settle(phi: &CubicForm, r: [Scalar; 3]) -> [Scalar; 3] {
    if r.iter().all(Scalar::is_exact) && phi.is_exact() {
        return r;
    }
    let p = ProjPoint::from_array(r.clone()).map(|p| p.normalized());
    let Ok(p) = p else { return r };
    let v = p.to_complex();
    let f = phi.evaluate(&p).to_complex();
    let g = phi.gradient(&p).map(|s| s.to_complex());
    let n2: f64 = g.iter().map(|z| z.norm_sqr()).sum();
    if n2 == 0.0 {
        return r;
    }
    let step: [Complex64; 3] = std::array::from_fn(|i| v[i] - f * g[i].conj() / n2);
    step.map(Scalar::Float)
}

/// p*q: the third intersection of the chord pq (the tangent when p = q) with the curve.
pub fn chord_tangent(p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint> {
    if !p.same_curve(q) {
        return Err(Error::CurveMismatch);
    }
    let phi = &p.curve;
    let (pv, qv) = (p.point.coords(), q.point.coords());
    let r = if !coincide(&p.point, &q.point) {
        // Φ(sp+tq) = st(c₂₁s + c₁₂t) up to the two vanishing end coefficients
        let c21 = dot(&phi.gradient_vec(pv), qv);
        let c12 = dot(&phi.gradient_vec(qv), pv);
        if both_vanish(&c21, &c12, phi.max_coeff()) {
            return Err(Error::SingularCurve);
        }
        std::array::from_fn(|i| &c12 * &pv[i] - &c21 * &qv[i])
    } else {
        let l = phi.tangent_line(&p.point).map_err(|_| Error::SingularCurve)?;
        let lv = l.coords();
        let qt = (0..3)
            .map(|i| {
                let mut e: [Scalar; 3] = std::array::from_fn(|_| Scalar::zero());
                e[i] = Scalar::one();
                [
                    &lv[1] * &e[2] - &lv[2] * &e[1],
                    &lv[2] * &e[0] - &lv[0] * &e[2],
                    &lv[0] * &e[1] - &lv[1] * &e[0],
                ]
            })
            .max_by(|a, b| {
                let score = |v: &[Scalar; 3]| {
                    let c = [
                        &v[1] * &pv[2] - &v[2] * &pv[1],
                        &v[2] * &pv[0] - &v[0] * &pv[2],
                        &v[0] * &pv[1] - &v[1] * &pv[0],
                    ];
                    scale_of(&c) / scale_of(v).max(f64::MIN_POSITIVE)
                };
                score(a).partial_cmp(&score(b)).unwrap()
            })
            .unwrap();
        // Φ(sp+tq') = t²(c₁₂s + c₀₃t)
        let c12 = dot(&phi.gradient_vec(&qt), pv);
        let c03 = phi.eval_vec(&qt);
        if both_vanish(&c12, &c03, phi.max_coeff()) {
            return Err(Error::SingularCurve);
        }
        std::array::from_fn(|i| &c03 * &pv[i] - &c12 * &qt[i])
    };
    let r = settle(phi, r);
    let point = ProjPoint::from_array(r).map_err(|_| Error::SingularCurve)?;
    CurvePoint::new(phi.clone(), point)
}

/// A smooth cubic with a chosen base point o, the zero of the group law.
#[derive(Clone, Debug)]
pub struct BasedGroup {
    curve: Arc<CubicForm>,
    base: CurvePoint,
    oo: CurvePoint,
}

impl BasedGroup {
    pub fn new(curve: CubicForm, base: ProjPoint) -> Result<Self> {
        if !curve.is_smooth().map_err(|_| Error::SingularCurve)? {
            return Err(Error::SingularCurve);
        }
        let curve = Arc::new(curve);
        let base = CurvePoint::new(curve.clone(), base)?;
        let oo = chord_tangent(&base, &base)?;
        Ok(Self { curve, base, oo })
    }

    pub fn curve(&self) -> &Arc<CubicForm> {
        &self.curve
    }

    pub fn base(&self) -> &CurvePoint {
        &self.base
    }

    /// The constant o*o; collinear triples sum to it.
    pub fn oo(&self) -> &CurvePoint {
        &self.oo
    }

    pub fn point(&self, p: ProjPoint) -> Result<CurvePoint> {
        CurvePoint::new(self.curve.clone(), p)
    }

    pub fn is_flex_based(&self) -> bool {
        self.oo.approx_eq(&self.base, 1e-7)
    }

    /// p + q = (p*q)*o
    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint> {
        chord_tangent(&chord_tangent(p, q)?, &self.base)
    }

    /// −p = (o*o)*p
    pub fn negate(&self, p: &CurvePoint) -> Result<CurvePoint> {
        chord_tangent(&self.oo, p)
    }

    /// n·p by double-and-add.
    pub fn multiply(&self, n: i64, p: &CurvePoint) -> Result<CurvePoint> {
        let mut acc = self.base.clone();
        let mut pow = p.clone();
        let mut m = n.unsigned_abs();
        while m > 0 {
            if m & 1 == 1 {
                acc = self.add(&acc, &pow)?;
            }
            m >>= 1;
            if m > 0 {
                pow = self.add(&pow, &pow)?;
            }
        }
        if n < 0 {
            self.negate(&acc)
        } else {
            Ok(acc)
        }
    }

    /// The points with 3p = o, which for a flex base are exactly the nine flexes.
    pub fn three_torsion(&self) -> Result<Vec<CurvePoint>> {
        if !self.is_flex_based() {
            return Err(Error::NonFlexBase);
        }
        find_flexes(&self.curve)?
            .points()
            .into_iter()
            .map(|f| CurvePoint::new(self.curve.clone(), f))
            .collect()
    }
}

pub fn add(g: &BasedGroup, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint> {
    g.add(p, q)
}

pub fn multiply(g: &BasedGroup, n: i64, p: &CurvePoint) -> Result<CurvePoint> {
    g.multiply(n, p)
}

pub fn three_torsion(g: &BasedGroup) -> Result<Vec<CurvePoint>> {
    g.three_torsion()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hesse::{exceptional_points, hesse_form, HesseParam};
    use crate::standard::StandardCurve;

    fn group() -> BasedGroup {
        BasedGroup::new(StandardCurve::from_ints(0, 1).to_form(), ProjPoint::from_ints(0, 1, 0).unwrap()).unwrap()
    }

    fn pt(g: &BasedGroup, x: i64, y: i64) -> CurvePoint {
        g.point(ProjPoint::from_ints(x, y, 1).unwrap()).unwrap()
    }

    #[test]
    fn chord_examples() {
        let g = group();
        let r = chord_tangent(&pt(&g, 2, 3), &pt(&g, 0, 1)).unwrap();
        assert!(r.is_exact());
        assert!(r.approx_eq(&pt(&g, -1, 0), 0.0));
        let t = chord_tangent(&pt(&g, 0, 1), &pt(&g, 0, 1)).unwrap();
        assert!(t.approx_eq(&pt(&g, 0, 1), 0.0));
        let v = chord_tangent(&pt(&g, 2, 3), g.base()).unwrap();
        assert!(v.approx_eq(&pt(&g, 2, -3), 0.0));
    }

    #[test]
    fn addition_examples() {
        let g = group();
        let s = g.add(&pt(&g, 2, 3), &pt(&g, 0, 1)).unwrap();
        assert!(s.approx_eq(&pt(&g, -1, 0), 0.0));
        let p = pt(&g, 2, 3);
        assert!(g.add(g.base(), &p).unwrap().approx_eq(&p, 0.0));
        let z = g.add(&p, &g.negate(&p).unwrap()).unwrap();
        assert!(z.approx_eq(g.base(), 0.0));
    }

    #[test]
    fn torsion_of_y2_x3_plus_1() {
        // (2,3) has order 6 on y² = x³ + 1
        let g = group();
        let p = pt(&g, 2, 3);
        assert!(g.multiply(6, &p).unwrap().approx_eq(g.base(), 0.0));
        assert!(!g.multiply(3, &p).unwrap().approx_eq(g.base(), 0.0));
        assert!(g.multiply(-1, &p).unwrap().approx_eq(&pt(&g, 2, -3), 0.0));
        assert!(g.multiply(0, &p).unwrap().approx_eq(g.base(), 0.0));
        assert!(g.multiply(1, &p).unwrap().approx_eq(&p, 0.0));
    }

    #[test]
    fn off_curve_point_rejected() {
        let g = group();
        assert!(matches!(g.point(ProjPoint::from_ints(1, 1, 1).unwrap()), Err(Error::NotOnCurve(_))));
    }

    #[test]
    fn hesse_torsion_is_exceptional_set() {
        let g = BasedGroup::new(hesse_form(&HesseParam::int(2)), ProjPoint::from_ints(1, -1, 0).unwrap()).unwrap();
        let t = g.three_torsion().unwrap();
        assert_eq!(t.len(), 9);
        for e in exceptional_points() {
            assert!(t.iter().any(|p| p.point().distance(&e) < 1e-6));
        }
        for p in &t {
            assert!(g.multiply(3, p).unwrap().approx_eq(g.base(), 1e-7));
        }
    }

    #[test]
    fn non_flex_base() {
        let g = BasedGroup::new(StandardCurve::from_ints(0, 1).to_form(), ProjPoint::from_ints(2, 3, 1).unwrap()).unwrap();
        assert_eq!(g.three_torsion().unwrap_err(), Error::NonFlexBase);
    }
}
