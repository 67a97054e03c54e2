//! Numerical elimination for pairs of ternary forms: z-resultants by interpolation,
//! generic unitary frames, and Newton refinement of common zeros.

use std::f64::consts::PI;

use num_complex::Complex64 as C;

use super::poly3::NumForm;
use crate::algebra::poly;
use crate::algebra::proj::pivot_index;

pub(crate) fn det(mut m: Vec<Vec<C>>) -> C {
    let n = m.len();
    let mut d = C::new(1.0, 0.0);
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&a, &b| m[a][col].norm().partial_cmp(&m[b][col].norm()).unwrap())
            .unwrap();
        if m[piv][col].norm() == 0.0 {
            return C::new(0.0, 0.0);
        }
        if piv != col {
            m.swap(piv, col);
            d = -d;
        }
        d *= m[col][col];
        for r in col + 1..n {
            let f = m[r][col] / m[col][col];
            for c in col..n {
                let v = m[col][c];
                m[r][c] -= f * v;
            }
        }
    }
    d
}

/// Resultant of two univariate polynomials with descending coefficients.
pub(crate) fn sylvester(f: &[C], g: &[C]) -> C {
    let (m, n) = (f.len() - 1, g.len() - 1);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut r = vec![C::new(0.0, 0.0); size];
        r[i..i + m + 1].copy_from_slice(f);
        rows.push(r);
    }
    for i in 0..m {
        let mut r = vec![C::new(0.0, 0.0); size];
        r[i..i + n + 1].copy_from_slice(g);
        rows.push(r);
    }
    det(rows)
}

/// Res_z(f(x,1,z), g(x,1,z)) as a polynomial in x of degree `df*dg`, descending.
pub(crate) fn resultant_in_x(f: &NumForm, df: usize, g: &NumForm, dg: usize) -> Vec<C> {
    let deg = df * dg;
    let n = deg + 1;
    let values: Vec<C> = (0..n)
        .map(|j| {
            let x = C::from_polar(1.0, 2.0 * PI * j as f64 / n as f64);
            sylvester(&f.z_poly(x, df), &g.z_poly(x, dg))
        })
        .collect();
    let mut asc = vec![C::new(0.0, 0.0); n];
    for (m, a) in asc.iter_mut().enumerate() {
        *a = (0..n)
            .map(|j| values[j] * C::from_polar(1.0, -2.0 * PI * (j * m) as f64 / n as f64))
            .sum::<C>()
            / n as f64;
    }
    asc.reverse();
    asc
}

/// A deterministic unitary matrix, different for each attempt.
pub(crate) fn frame(attempt: usize) -> [[C; 3]; 3] {
    let t = attempt as f64 + 1.0;
    let (a, b, c) = (0.7548776662 * t + 0.31, 0.5698402910 * t + 0.87, 0.4142135624 * t + 0.53);
    let rot = |i: usize, j: usize, th: f64| {
        let mut m = [[0.0f64; 3]; 3];
        for (k, row) in m.iter_mut().enumerate() {
            row[k] = 1.0;
        }
        m[i][i] = th.cos();
        m[j][j] = th.cos();
        m[i][j] = -th.sin();
        m[j][i] = th.sin();
        m
    };
    let mul = |a: [[f64; 3]; 3], b: [[f64; 3]; 3]| {
        let mut m = [[0.0f64; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
            }
        }
        m
    };
    let r = mul(mul(rot(0, 1, a), rot(1, 2, b)), rot(0, 2, c));
    let phase = [0.0, 1.1071487178 * t, 2.6779450446 * t];
    std::array::from_fn(|i| std::array::from_fn(|j| r[i][j] * C::from_polar(1.0, phase[j])))
}

pub(crate) fn mat_vec(m: &[[C; 3]; 3], v: &[C; 3]) -> [C; 3] {
    std::array::from_fn(|i| (0..3).map(|j| m[i][j] * v[j]).sum())
}

/// Max of |f|/‖f‖ and |g|/‖g‖ at the normalized representative of `p`.
pub(crate) fn residual(f: &NumForm, g: &NumForm, p: &[C; 3]) -> f64 {
    let k = pivot_index(p);
    let q = p.map(|z| z / p[k]);
    (f.eval(&q).norm() / f.max_coeff()).max(g.eval(&q).norm() / g.max_coeff())
}

/// Newton iteration for f = g = 0 in the affine chart of the largest coordinate.
/// Returns the normalized iterate with the smallest residual.
pub(crate) fn newton2(f: &NumForm, g: &NumForm, p0: [C; 3], iters: usize) -> [C; 3] {
    let (nf, ng) = (f.max_coeff(), g.max_coeff());
    let mut p = p0;
    let mut best = p0;
    let mut best_r = f64::INFINITY;
    for _ in 0..iters {
        let c = pivot_index(&p);
        let pc = p[c];
        p = p.map(|z| z / pc);
        let r = residual(f, g, &p);
        if r < best_r {
            best_r = r;
            best = p;
        }
        if r == 0.0 {
            break;
        }
        let (a, b) = ((c + 1) % 3, (c + 2) % 3);
        let fv = f.eval(&p) / nf;
        let gv = g.eval(&p) / ng;
        let gf = f.grad(&p).map(|z| z / nf);
        let gg = g.grad(&p).map(|z| z / ng);
        let d = gf[a] * gg[b] - gf[b] * gg[a];
        if d.norm() == 0.0 || !d.is_finite() {
            break;
        }
        let da = (fv * gg[b] - gv * gf[b]) / d;
        let db = (gf[a] * gv - gg[a] * fv) / d;
        p[a] -= da;
        p[b] -= db;
        if !(p[a].is_finite() && p[b].is_finite()) {
            break;
        }
        if da.norm() + db.norm() < 1e-17 {
            let r = residual(f, g, &p);
            if r < best_r {
                best = p;
            }
            break;
        }
    }
    let c = pivot_index(&best);
    let bc = best[c];
    best.map(|z| z / bc)
}

/// Root z of `f(x,1,z)` (degree `df`) at which |g(x,1,z)| is smallest.
pub(crate) fn back_substitute(f: &NumForm, df: usize, g: &NumForm, x: C) -> Option<[C; 3]> {
    let zp = f.z_poly(x, df);
    let zs = poly::roots(&zp).ok()?;
    zs.into_iter()
        .map(|z| [x, C::new(1.0, 0.0), z])
        .min_by(|a, b| g.eval(a).norm().partial_cmp(&g.eval(b).norm()).unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_is_unitary() {
        for attempt in 0..5 {
            let u = frame(attempt);
            for i in 0..3 {
                for j in 0..3 {
                    let d: C = (0..3).map(|k| u[k][i].conj() * u[k][j]).sum();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((d - want).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn sylvester_of_linear_factors() {
        // Res(z - 2, z^2 - 1) = (2^2 - 1) = 3
        let f = [C::new(1.0, 0.0), C::new(-2.0, 0.0)];
        let g = [C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(-1.0, 0.0)];
        assert!((sylvester(&f, &g) - C::new(3.0, 0.0)).norm() < 1e-12);
    }
}
