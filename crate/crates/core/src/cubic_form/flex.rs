use num_complex::Complex64 as C;
use serde::Serialize;

use super::elimination::{back_substitute, frame, mat_vec, newton2, residual, resultant_in_x};
use super::{singular_points, CubicForm};
use crate::algebra::{line_through, poly, ProjPoint, Scalar};
use crate::error::{Error, Result};

pub const FLEX_RESIDUAL: f64 = 1e-8;
pub const FLEX_CLUSTER: f64 = 1e-6;
const ATTEMPTS: usize = 12;

#[derive(Clone, Debug, Serialize)]
pub struct Flex {
    pub point: ProjPoint,
    pub residual: f64,
}

/// The nine flexes of a smooth cubic, sorted by normalized coordinates.
#[derive(Clone, Debug, Serialize)]
pub struct FlexSet {
    flexes: Vec<Flex>,
}

impl FlexSet {
    pub fn len(&self) -> usize {
        self.flexes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flexes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Flex> {
        self.flexes.iter()
    }

    pub fn points(&self) -> Vec<ProjPoint> {
        self.flexes.iter().map(|f| f.point.clone()).collect()
    }

    pub fn get(&self, i: usize) -> Option<&ProjPoint> {
        self.flexes.get(i).map(|f| &f.point)
    }

    pub fn max_residual(&self) -> f64 {
        self.flexes.iter().map(|f| f.residual).fold(0.0, f64::max)
    }

    pub fn position(&self, p: &ProjPoint, tol: f64) -> Option<usize> {
        self.flexes.iter().position(|f| f.point.distance(p) <= tol)
    }

    pub fn contains(&self, p: &ProjPoint, tol: f64) -> bool {
        self.position(p, tol).is_some()
    }
}

fn clean(z: C) -> C {
    let c = |v: f64| if v.abs() < 1e-15 { 0.0 } else { v };
    C::new(c(z.re), c(z.im))
}

fn sort_key(p: &[C; 3]) -> [i64; 6] {
    let r = |v: f64| (v * 1e6).round() as i64;
    [r(p[0].re), r(p[0].im), r(p[1].re), r(p[1].im), r(p[2].re), r(p[2].im)]
}

/// The nine flexes: common zeros of Φ and its Hessian, found from the z-resultant in a
/// generic unitary frame and Newton-polished in the original coordinates.
/// For an exact form, a rational point with small denominators (≤ 12) within 1e-9 of
/// the numerical flex `p` that is exactly a flex, if there is one.
pub fn exact_flex(phi: &CubicForm, p: &ProjPoint) -> Option<ProjPoint> {
    if !phi.is_exact() {
        return None;
    }
    let c = p.normalized().to_complex();
    if c.iter().any(|z| z.im.abs() > 1e-9) {
        return None;
    }
    let hess = phi.hessian().ok()?;
    for den in 1..=12i64 {
        let scaled = c.map(|z| z.re * den as f64);
        let r = scaled.map(f64::round);
        if r.iter().zip(&scaled).any(|(a, b)| (a - b).abs() > 1e-9 * den as f64) || r.iter().any(|v| v.abs() > 1e12) {
            continue;
        }
        let q = ProjPoint::new(
            Scalar::ratio(r[0] as i64, den),
            Scalar::ratio(r[1] as i64, den),
            Scalar::ratio(r[2] as i64, den),
        )
        .ok()?;
        if phi.evaluate(&q).is_zero() && hess.evaluate(&q).is_zero() {
            return Some(q);
        }
    }
    None
}

pub fn find_flexes(phi: &CubicForm) -> Result<FlexSet> {
    match singular_points(phi) {
        Ok(s) if s.is_empty() => {}
        Ok(_) | Err(Error::DegenerateForm) => return Err(Error::SingularCurve),
        Err(e) => return Err(e),
    }
    let h = phi.hessian().map_err(|_| Error::SingularCurve)?;
    let f = phi.to_numeric();
    let g = h.to_numeric();
    let mut last = String::from("no attempt succeeded");
    for attempt in 0..ATTEMPTS {
        match try_frame(&f, &g, attempt) {
            Ok(mut pts) => {
                pts.sort_by_key(|(p, _)| sort_key(p));
                let flexes = pts
                    .into_iter()
                    .map(|(p, r)| Flex { point: ProjPoint::from_complex(p.map(clean)).unwrap(), residual: r })
                    .collect();
                return Ok(FlexSet { flexes });
            }
            Err(msg) => last = msg,
        }
    }
    Err(Error::ConvergenceFailure(format!("flexes: {last}")))
}

fn try_frame(
    f: &super::poly3::NumForm,
    g: &super::poly3::NumForm,
    attempt: usize,
) -> std::result::Result<Vec<([C; 3], f64)>, String> {
    let u = frame(attempt);
    let fu = f.substitute(&u);
    let gu = g.substitute(&u);
    let lead = |h: &super::poly3::NumForm| {
        h.terms.iter().find(|(e, _)| *e == [0, 0, 3]).map(|(_, c)| c.norm()).unwrap_or(0.0) / h.max_coeff()
    };
    if lead(&fu) < 1e-6 || lead(&gu) < 1e-6 {
        return Err("z-degree drops in frame".into());
    }
    let res = resultant_in_x(&fu, 3, &gu, 3);
    let scale = res.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 || res[0].norm() < 1e-10 * scale {
        return Err("z-resultant degenerates".into());
    }
    let xs = poly::roots(&res).map_err(|e| e.to_string())?;
    let mut out: Vec<([C; 3], f64)> = Vec::with_capacity(9);
    for x in xs {
        let pu = back_substitute(&fu, 3, &gu, x).ok_or("back-substitution failed")?;
        let p = newton2(f, g, mat_vec(&u, &pu), 60);
        let r = residual(f, g, &p);
        if !(r < FLEX_RESIDUAL) {
            return Err(format!("residual {r:.3e} above threshold"));
        }
        let pp = ProjPoint::from_complex(p).map_err(|e| e.to_string())?;
        for (q, _) in &out {
            if ProjPoint::from_complex(*q).unwrap().distance(&pp) < FLEX_CLUSTER {
                return Err("two candidates converged to the same flex".into());
            }
        }
        out.push((p, r));
    }
    if out.len() != 9 {
        return Err(format!("found {} flexes", out.len()));
    }
    Ok(out)
}

/// Index triples of collinear flexes; for nine flexes of a smooth cubic there are 12.
pub fn flex_lines(set: &FlexSet) -> Vec<[usize; 3]> {
    let pts = set.points();
    let mut lines = Vec::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let Ok(l) = line_through(&pts[i], &pts[j]) else { continue };
            for (k, p) in pts.iter().enumerate().skip(j + 1) {
                if l.residual(p) < FLEX_CLUSTER {
                    lines.push([i, j, k]);
                }
            }
        }
    }
    lines
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_flexes_are_snapped() {
        let fermat = CubicForm::from_ints([1, 0, 0, 0, 0, 0, 1, 0, 0, 1]).unwrap();
        let f = find_flexes(&fermat).unwrap();
        let exact: Vec<ProjPoint> = f.iter().filter_map(|x| exact_flex(&fermat, &x.point)).collect();
        assert_eq!(exact.len(), 3);
        assert!(exact.iter().all(|p| p.is_exact()));
        assert!(exact_flex(&fermat.to_float(), &f.points()[0]).is_none());
    }
    use crate::algebra::Scalar;

    fn standard(a: i64, b: i64) -> CubicForm {
        CubicForm::from_ints([1, 0, 0, 0, 0, a, 0, -1, 0, b]).unwrap()
    }

    #[test]
    fn fermat_flexes() {
        let f = CubicForm::from_ints([1, 0, 0, 0, 0, 0, 1, 0, 0, 1]).unwrap();
        let s = find_flexes(&f).unwrap();
        assert_eq!(s.len(), 9);
        assert!(s.contains(&ProjPoint::from_ints(1, -1, 0).unwrap(), 1e-9));
        assert!(s.contains(&ProjPoint::from_ints(0, 1, -1).unwrap(), 1e-9));
        assert!(s.max_residual() < FLEX_RESIDUAL);
        assert_eq!(flex_lines(&s).len(), 12);
    }

    #[test]
    fn standard_form_has_flex_at_infinity() {
        let s = find_flexes(&standard(0, 1)).unwrap();
        for p in [(0, 1, 0), (0, 1, 1), (0, -1, 1)] {
            assert!(s.contains(&ProjPoint::from_ints(p.0, p.1, p.2).unwrap(), 1e-9), "{p:?}");
        }
    }

    #[test]
    fn singular_curve_rejected() {
        assert_eq!(find_flexes(&standard(-3, 2)).unwrap_err(), Error::SingularCurve);
        let lines = CubicForm::new(std::array::from_fn(|i| match i {
            0 | 6 | 9 => Scalar::one(),
            4 => Scalar::int(-3),
            _ => Scalar::zero(),
        }))
        .unwrap();
        assert_eq!(find_flexes(&lines).unwrap_err(), Error::SingularCurve);
    }
}
