//! Univariate complex polynomials: evaluation, root finding, expansion from roots.
//!
//! Coefficient slices are in descending order: `c[0] x^n + ... + c[n]`.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use super::scalar::Scalar;
use crate::error::{Error, Result};

pub fn eval(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    coeffs.iter().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
}

/// Value and first derivative by Horner's scheme.
pub fn eval_with_derivative(coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// Monic polynomial with the given roots, descending coefficients.
pub fn from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (i, &ci) in c.iter().enumerate() {
            next[i] += ci;
            next[i + 1] -= ci * r;
        }
        c = next;
    }
    c
}

/// All complex roots, with multiplicity, of a polynomial with nonzero leading coefficient.
///
/// Eigenvalues of the (rescaled) companion matrix, each followed by a guarded Newton step.
pub fn roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let lead = *coeffs.first().ok_or(Error::ZeroLeadingCoefficient)?;
    if lead.norm() == 0.0 || !lead.is_finite() {
        return Err(Error::ZeroLeadingCoefficient);
    }
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    if monic.iter().any(|c| !c.is_finite()) {
        return Err(Error::ConvergenceFailure("non-finite coefficients".into()));
    }
    // x = s*y moves the roots to roughly unit size
    let s = (1..=n)
        .map(|k| monic[k].norm().powf(1.0 / k as f64))
        .fold(0.0f64, f64::max);
    if s == 0.0 {
        return Ok(vec![Complex64::new(0.0, 0.0); n]);
    }
    let mut scaled = monic.clone();
    let mut sk = 1.0;
    for c in scaled.iter_mut().skip(1) {
        sk *= s;
        *c /= sk;
    }
    let eig = if n == 1 {
        vec![-scaled[1]]
    } else {
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        for j in 0..n {
            m[(0, j)] = -scaled[j + 1];
        }
        for i in 1..n {
            m[(i, i - 1)] = Complex64::new(1.0, 0.0);
        }
        let schur = Schur::try_new(m, f64::EPSILON, 100_000)
            .ok_or_else(|| Error::ConvergenceFailure("companion eigenvalues".into()))?;
        let (_, t) = schur.unpack();
        (0..n).map(|i| t[(i, i)]).collect::<Vec<_>>()
    };
    let mut out = Vec::with_capacity(n);
    for y in eig {
        let x = y * s;
        out.push(newton_polish(&monic, x, 3));
    }
    Ok(out)
}

/// Newton steps accepted only while they reduce |p|.
pub fn newton_polish(coeffs: &[Complex64], mut x: Complex64, steps: usize) -> Complex64 {
    let (mut px, _) = eval_with_derivative(coeffs, x);
    for _ in 0..steps {
        let (p, dp) = eval_with_derivative(coeffs, x);
        if dp.norm() == 0.0 || p.norm() == 0.0 {
            break;
        }
        let cand = x - p / dp;
        let pc = eval(coeffs, cand);
        if cand.is_finite() && pc.norm() < px.norm() {
            x = cand;
            px = pc;
        } else {
            break;
        }
    }
    x
}

/// The three complex roots of `c3 x^3 + c2 x^2 + c1 x + c0`.
pub fn roots_cubic(c3: &Scalar, c2: &Scalar, c1: &Scalar, c0: &Scalar) -> Result<[Scalar; 3]> {
    if c3.is_zero() {
        return Err(Error::ZeroLeadingCoefficient);
    }
    let r = roots(&[c3.to_complex(), c2.to_complex(), c1.to_complex(), c0.to_complex()])?;
    Ok([Scalar::Float(r[0]), Scalar::Float(r[1]), Scalar::Float(r[2])])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        v
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cubic_x3_minus_x() {
        let r = roots_cubic(&Scalar::int(1), &Scalar::int(0), &Scalar::int(-1), &Scalar::int(0)).unwrap();
        let r = sorted(r.iter().map(|s| s.to_complex()).collect());
        for (got, want) in r.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((got - c(want, 0.0)).norm() < 1e-12, "{got}");
        }
    }

    #[test]
    fn cube_roots_of_minus_one() {
        let r = roots_cubic(&Scalar::int(1), &Scalar::int(0), &Scalar::int(0), &Scalar::int(1)).unwrap();
        let r = sorted(r.iter().map(|s| s.to_complex()).collect());
        let h = 3f64.sqrt() / 2.0;
        let want = [c(-1.0, 0.0), c(0.5, -h), c(0.5, h)];
        for (got, w) in r.iter().zip(want) {
            assert!((got - w).norm() < 1e-12, "{got}");
        }
    }

    #[test]
    fn double_root() {
        // (x-1)^2 (x+2) = x^3 - 3x + 2
        let expanded = from_roots(&[c(1.0, 0.0), c(1.0, 0.0), c(-2.0, 0.0)]);
        assert!((expanded[2] - c(-3.0, 0.0)).norm() < 1e-15);
        assert!((expanded[3] - c(2.0, 0.0)).norm() < 1e-15);
        let r = roots_cubic(&Scalar::int(1), &Scalar::int(0), &Scalar::int(-3), &Scalar::int(2)).unwrap();
        let r = sorted(r.iter().map(|s| s.to_complex()).collect());
        assert!((r[0] - c(-2.0, 0.0)).norm() < 1e-12);
        assert!((r[1] - c(1.0, 0.0)).norm() < 1e-7);
        assert!((r[2] - c(1.0, 0.0)).norm() < 1e-7);
    }

    #[test]
    fn zero_leading_coefficient() {
        let e = roots_cubic(&Scalar::zero(), &Scalar::int(1), &Scalar::int(1), &Scalar::int(1));
        assert_eq!(e.unwrap_err(), Error::ZeroLeadingCoefficient);
    }

    #[test]
    fn degree_nine_with_spread_roots() {
        let want: Vec<Complex64> = (0..9).map(|k| Complex64::from_polar(0.3 + 0.4 * k as f64, 0.7 * k as f64)).collect();
        let p = from_roots(&want);
        let got = roots(&p).unwrap();
        for w in &want {
            let best = got.iter().map(|g| (g - w).norm()).fold(f64::MAX, f64::min);
            assert!(best < 1e-9 * (1.0 + w.norm()), "missing root {w}");
        }
    }
}
