#![allow(dead_code)]

use cubica::{CubicForm, ProjMap, ProjPoint, Scalar};
use num_complex::Complex64;
use proptest::prelude::*;

pub fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Uniform-ish in the closed unit disc.
pub fn disc() -> impl Strategy<Value = Complex64> {
    (0.0..1.0f64, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r.sqrt(), t))
}

pub fn smooth_cubic() -> impl Strategy<Value = CubicForm> {
    prop::array::uniform10(disc())
        .prop_filter_map("singular", |c| CubicForm::from_complex(c).ok().filter(|f| f.is_smooth().unwrap_or(false)))
}

/// Hesse parameter away from the singular values k³ = 1.
pub fn smooth_k() -> impl Strategy<Value = Complex64> {
    (-3.0..3.0f64, -3.0..3.0f64)
        .prop_map(|(a, b)| cx(a, b))
        .prop_filter("near k^3 = 1", |k| (k * k * k - 1.0).norm() > 0.01)
}

pub fn invertible_map() -> impl Strategy<Value = ProjMap> {
    prop::array::uniform3(prop::array::uniform3(disc()))
        .prop_filter_map("singular", |m| ProjMap::from_complex(m).ok())
        .prop_filter("ill-conditioned", |m| m.det().abs() > 0.05)
}

/// Points of Φ on the line through two fixed points given by the seeds.
pub fn points_on(phi: &CubicForm, u: [Complex64; 3], v: [Complex64; 3]) -> Vec<ProjPoint> {
    let us = u.map(Scalar::Float);
    let vs = v.map(Scalar::Float);
    let r = phi.restrict_to_line(&us, &vs);
    let Ok(ts) = cubica::roots_cubic(&r[3], &r[2], &r[1], &r[0]) else { return vec![] };
    ts.iter()
        .filter_map(|t| {
            let t = t.to_complex();
            ProjPoint::from_complex(std::array::from_fn(|i| u[i] + t * v[i])).ok()
        })
        .filter(|p| phi.residual(p) < 1e-10)
        .collect()
}

pub fn seeds() -> impl Strategy<Value = ([Complex64; 3], [Complex64; 3])> {
    (prop::array::uniform3(disc()), prop::array::uniform3(disc()))
}
