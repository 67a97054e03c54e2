use num_complex::Complex64 as C;

use super::elimination::{back_substitute, frame, mat_vec, newton2, resultant_in_x};
use super::poly3::NumForm;
use super::{CubicForm, Family};
use crate::algebra::proj::pivot_index;
use crate::algebra::{poly, ProjPoint, Scalar};
use crate::error::{Error, Result};

const ATTEMPTS: usize = 8;
const GRADIENT_TOL: f64 = 1e-6;

fn omega(m: i64) -> C {
    C::from_polar(1.0, 2.0 * std::f64::consts::PI * m.rem_euclid(3) as f64 / 3.0)
}

/// Singular points of x³+y³+z³−3kxyz: empty unless k³ = 1 or k = ∞.
fn hesse_singular(k: &Option<Scalar>) -> Vec<ProjPoint> {
    let Some(k) = k else {
        return vec![
            ProjPoint::from_ints(0, 0, 1).unwrap(),
            ProjPoint::from_ints(0, 1, 0).unwrap(),
            ProjPoint::from_ints(1, 0, 0).unwrap(),
        ];
    };
    if k.is_exact() {
        if *k != Scalar::one() {
            return Vec::new();
        }
        let mut out = vec![ProjPoint::from_ints(1, 1, 1).unwrap()];
        for i in 1..3 {
            out.push(ProjPoint::from_complex([C::new(1.0, 0.0), omega(i), omega(-i)]).unwrap());
        }
        return out;
    }
    let kc = k.to_complex();
    if (kc.powu(3) - 1.0).norm() > 1e-9 {
        return Vec::new();
    }
    let m = (0..3).min_by(|&a, &b| (kc - omega(a)).norm().partial_cmp(&(kc - omega(b)).norm()).unwrap()).unwrap();
    (0..3)
        .map(|i| ProjPoint::from_complex([C::new(1.0, 0.0), omega(i), omega(-i - m)]).unwrap().normalized())
        .collect()
}

/// Singular points of −y²z + x³ + axz² + bz³: the double root of x³+ax+b, if any.
fn standard_singular(a: &Scalar, b: &Scalar) -> Vec<ProjPoint> {
    let t1 = Scalar::int(4) * a.powi(3);
    let t2 = Scalar::int(27) * b.square();
    let d = &t1 + &t2;
    let singular = if d.is_exact() {
        d.is_zero()
    } else {
        (t1.is_zero() && t2.is_zero()) || d.abs() <= 1e-12 * (t1.abs() + t2.abs())
    };
    if !singular {
        return Vec::new();
    }
    let x = if a.is_zero() || a.abs() < 1e-300 {
        Scalar::zero()
    } else {
        -(Scalar::int(3) * b) / (Scalar::int(2) * a)
    };
    vec![ProjPoint::new(x, Scalar::zero(), Scalar::one()).unwrap().normalized()]
}

/// All points where Φ_x, Φ_y, Φ_z vanish simultaneously.
///
/// Hesse and standard forms use closed-form criteria; anything else is solved from the
/// resultant of two generic combinations of the partials. A repeated linear factor gives
/// a whole line of singular points and is reported as `DegenerateForm`.
pub fn singular_points(phi: &CubicForm) -> Result<Vec<ProjPoint>> {
    match phi.family() {
        Family::Hesse(k) => return Ok(hesse_singular(&k)),
        Family::Standard(a, b) => return Ok(standard_singular(&a, &b)),
        Family::General => {}
    }
    let poly = phi.to_poly();
    let partials: Vec<NumForm> = (0..3).map(|i| poly.deriv(i).to_numeric()).collect();
    let scale = partials.iter().map(NumForm::max_coeff).fold(0.0, f64::max);
    let grad_residual = |p: &[C; 3]| {
        let k = pivot_index(p);
        let q = p.map(|z| z / p[k]);
        partials.iter().map(|f| f.eval(&q).norm()).fold(0.0, f64::max) / scale
    };
    let mut degenerate = 0;
    let mut last = String::new();
    for attempt in 0..ATTEMPTS {
        let t = attempt as f64;
        let w = [
            C::from_polar(1.0, 0.37 + 1.3 * t),
            C::from_polar(0.8, 2.11 + 0.7 * t),
            C::from_polar(0.9, 4.03 + 2.1 * t),
            C::from_polar(1.1, 5.27 + 0.9 * t),
        ];
        let g1 = NumForm::combine(&[(&partials[0], C::new(1.0, 0.0)), (&partials[1], w[0]), (&partials[2], w[1])]);
        let g2 = NumForm::combine(&[(&partials[0], w[2]), (&partials[1], C::new(1.0, 0.0)), (&partials[2], w[3])]);
        let u = frame(attempt + 3);
        let g1u = g1.substitute(&u);
        let g2u = g2.substitute(&u);
        let (n1, n2) = (g1u.max_coeff(), g2u.max_coeff());
        let res = resultant_in_x(&g1u, 2, &g2u, 2);
        let rmax = res.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if rmax <= 1e-10 * (n1 * n2).powi(2) {
            degenerate += 1;
            if degenerate >= 2 {
                return Err(Error::DegenerateForm);
            }
            continue;
        }
        let lead = |h: &NumForm| h.terms.iter().find(|(e, _)| *e == [0, 0, 2]).map(|(_, c)| c.norm()).unwrap_or(0.0) / h.max_coeff();
        if lead(&g1u) < 1e-6 || lead(&g2u) < 1e-6 || res[0].norm() < 1e-10 * rmax {
            last = "frame degenerates".into();
            continue;
        }
        let xs = match poly::roots(&res) {
            Ok(xs) => xs,
            Err(e) => {
                last = e.to_string();
                continue;
            }
        };
        let mut found: Vec<ProjPoint> = Vec::new();
        for x in xs {
            let Some(pu) = back_substitute(&g1u, 2, &g2u, x) else { continue };
            let p = newton2(&g1, &g2, mat_vec(&u, &pu), 80);
            if grad_residual(&p) > GRADIENT_TOL {
                continue;
            }
            let pp = ProjPoint::from_complex(p)?.normalized();
            if !found.iter().any(|q| q.distance(&pp) < 1e-4) {
                found.push(pp);
            }
        }
        return Ok(found);
    }
    Err(Error::ConvergenceFailure(format!("singular points: {last}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ProjMap;

    fn hesse(k: Scalar) -> CubicForm {
        CubicForm::new(std::array::from_fn(|i| match i {
            0 | 6 | 9 => Scalar::one(),
            4 => Scalar::int(-3) * k.clone(),
            _ => Scalar::zero(),
        }))
        .unwrap()
    }

    #[test]
    fn smooth_hesse_member() {
        assert!(singular_points(&hesse(Scalar::int(2))).unwrap().is_empty());
    }

    #[test]
    fn hesse_infinity_triangle() {
        let xyz = CubicForm::from_ints([0, 0, 0, 0, 1, 0, 0, 0, 0, 0]).unwrap();
        let s = singular_points(&xyz).unwrap();
        assert_eq!(s.len(), 3);
        for p in [(0, 0, 1), (1, 0, 0), (0, 1, 0)] {
            assert!(s.iter().any(|q| q.approx_eq(&ProjPoint::from_ints(p.0, p.1, p.2).unwrap(), 0.0)));
        }
    }

    #[test]
    fn hesse_three_lines() {
        let s = singular_points(&hesse(Scalar::one())).unwrap();
        assert_eq!(s.len(), 3);
        let phi = hesse(Scalar::one());
        for p in &s {
            assert!(phi.gradient(p).iter().all(|g| g.abs() < 1e-12));
        }
    }

    #[test]
    fn standard_double_root() {
        let f = CubicForm::from_ints([1, 0, 0, 0, 0, -3, 0, -1, 0, 2]).unwrap();
        let s = singular_points(&f).unwrap();
        assert!(s.iter().any(|p| p.approx_eq(&ProjPoint::from_ints(1, 0, 1).unwrap(), 0.0)));
    }

    #[test]
    fn general_path_finds_transformed_node() {
        let f = CubicForm::from_ints([1, 0, 0, 0, 0, -3, 0, -1, 0, 2]).unwrap();
        let a = ProjMap::from_ints([[1, 2, 0], [0, 1, 1], [3, 0, 1]]).unwrap();
        let g = f.transform(&a);
        assert!(matches!(g.family(), Family::General));
        let s = singular_points(&g).unwrap();
        assert_eq!(s.len(), 1);
        let want = a.apply(&ProjPoint::from_ints(1, 0, 1).unwrap());
        assert!(s[0].distance(&want) < 1e-6);
    }

    #[test]
    fn general_path_smooth_and_cusp() {
        let smooth = CubicForm::from_ints([1, 2, -3, 0, 4, 5, 6, 7, -8, 9]).unwrap();
        let a = ProjMap::from_ints([[1, 2, 0], [0, 1, 1], [3, 0, 1]]).unwrap();
        let s = singular_points(&smooth);
        assert!(s.unwrap().is_empty());
        // cusp y²z = x³ moved off the normal form
        let cusp = CubicForm::from_ints([1, 0, 0, 0, 0, 0, 0, -1, 0, 0]).unwrap().transform(&a);
        let s = singular_points(&cusp).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s[0].distance(&a.apply(&ProjPoint::from_ints(0, 0, 1).unwrap())) < 1e-5);
    }

    #[test]
    fn repeated_factor_is_degenerate() {
        // x²·(x + y + z)
        let f = CubicForm::from_ints([1, 1, 1, 0, 0, 0, 0, 0, 0, 0]).unwrap();
        assert_eq!(singular_points(&f).unwrap_err(), Error::DegenerateForm);
    }
}
