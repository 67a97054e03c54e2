//! Ternary cubic forms, their Hessians, singular points and flexes.

mod elimination;
mod flex;
pub mod poly3;
mod singular;

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::proj::dot;
use crate::algebra::{ProjLine, ProjMap, ProjPoint, Scalar};
use crate::error::{Error, Result};
pub use flex::{exact_flex, find_flexes, flex_lines, Flex, FlexSet};
use poly3::{NumForm, Poly3};
pub use singular::singular_points;

/// Monomial exponents in coefficient order x³, x²y, x²z, xy², xyz, xz², y³, y²z, yz², z³.
pub const MONOMIALS: [[u8; 3]; 10] = [
    [3, 0, 0],
    [2, 1, 0],
    [2, 0, 1],
    [1, 2, 0],
    [1, 1, 1],
    [1, 0, 2],
    [0, 3, 0],
    [0, 2, 1],
    [0, 1, 2],
    [0, 0, 3],
];

pub fn monomial_index(e: [u8; 3]) -> Option<usize> {
    MONOMIALS.iter().position(|m| *m == e)
}

/// A nonzero homogeneous cubic Φ(x, y, z); equality is up to a nonzero factor.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "FormSpec", into = "RawForm")]
pub struct CubicForm {
    coeffs: [Scalar; 10],
}

#[derive(Serialize)]
struct RawForm {
    coeffs: [Scalar; 10],
}

/// Accepted JSON shapes: {"coeffs": [...]}, {"hesse": k} and {"standard": [a, b]}.
#[derive(Deserialize)]
#[serde(untagged)]
enum FormSpec {
    Coeffs { coeffs: [Scalar; 10] },
    Hesse { hesse: crate::hesse::HesseParam },
    Standard { standard: [Scalar; 2] },
}

impl TryFrom<FormSpec> for CubicForm {
    type Error = Error;
    fn try_from(r: FormSpec) -> Result<Self> {
        match r {
            FormSpec::Coeffs { coeffs } => CubicForm::new(coeffs),
            FormSpec::Hesse { hesse } => Ok(crate::hesse::hesse_form(&hesse)),
            FormSpec::Standard { standard: [a, b] } => Ok(crate::standard::StandardCurve::new(a, b).to_form()),
        }
    }
}

impl From<CubicForm> for RawForm {
    fn from(f: CubicForm) -> Self {
        RawForm { coeffs: f.coeffs }
    }
}

/// Recognized normal-form families.
#[derive(Clone, Debug)]
pub enum Family {
    /// x³+y³+z³−3kxyz; `None` stands for k = ∞ (xyz).
    Hesse(Option<Scalar>),
    /// −y²z + x³ + axz² + bz³
    Standard(Scalar, Scalar),
    General,
}

impl CubicForm {
    pub fn new(coeffs: [Scalar; 10]) -> Result<Self> {
        if coeffs.iter().all(Scalar::is_zero) {
            return Err(Error::ZeroForm);
        }
        if coeffs.iter().any(|c| !c.to_complex().is_finite()) {
            return Err(Error::InvalidInput("non-finite coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn from_ints(c: [i64; 10]) -> Result<Self> {
        Self::new(c.map(Scalar::int))
    }

    pub fn from_complex(c: [Complex64; 10]) -> Result<Self> {
        Self::new(c.map(Scalar::Float))
    }

    pub fn from_poly(p: &Poly3) -> Result<Self> {
        if p.terms().any(|(e, _)| e.iter().sum::<u8>() != 3) {
            return Err(Error::InvalidInput("polynomial is not a homogeneous cubic".into()));
        }
        Self::new(MONOMIALS.map(|e| p.coeff(e)))
    }

    pub fn to_poly(&self) -> Poly3 {
        Poly3::from_terms(MONOMIALS.iter().zip(self.coeffs.iter()).map(|(e, c)| (*e, c.clone())))
    }

    pub(crate) fn to_numeric(&self) -> NumForm {
        NumForm { terms: MONOMIALS.iter().zip(self.coeffs.iter()).map(|(e, c)| (*e, c.to_complex())).collect() }
    }

    pub fn coeffs(&self) -> &[Scalar; 10] {
        &self.coeffs
    }

    pub fn coeff(&self, e: [u8; 3]) -> &Scalar {
        &self.coeffs[monomial_index(e).expect("cubic monomial")]
    }

    pub fn to_complex(&self) -> [Complex64; 10] {
        self.coeffs.clone().map(|c| c.to_complex())
    }

    pub fn is_exact(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_exact)
    }

    pub fn to_float(&self) -> CubicForm {
        CubicForm { coeffs: self.coeffs.clone().map(|c| c.to_float()) }
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(Scalar::abs).fold(0.0, f64::max)
    }

    /// Real up to scale, with tolerance relative to the largest coefficient.
    pub fn is_real(&self, tol: f64) -> bool {
        self.normalized().coeffs.iter().all(|c| c.im().abs() <= tol)
    }

    pub fn scaled(&self, s: &Scalar) -> CubicForm {
        CubicForm { coeffs: self.coeffs.clone().map(|c| &c * s) }
    }

    /// Exact: divided by the first nonzero coefficient. Float: divided by the first
    /// coefficient of (nearly) maximal modulus.
    pub fn normalized(&self) -> CubicForm {
        if self.is_exact() {
            let d = self.coeffs.iter().find(|c| !c.is_zero()).unwrap().clone();
            return CubicForm { coeffs: self.coeffs.clone().map(|c| c / &d) };
        }
        let m = self.max_coeff();
        let d = self.coeffs.iter().find(|c| c.abs() >= m * (1.0 - 1e-6)).unwrap().to_complex();
        CubicForm { coeffs: self.coeffs.clone().map(|c| Scalar::Float(c.to_complex() / d)) }
    }

    /// Coefficient-wise distance between the two forms taken up to scale.
    pub fn distance(&self, other: &CubicForm) -> f64 {
        let a = self.to_complex();
        let b = other.to_complex();
        let one = |a: &[Complex64; 10], b: &[Complex64; 10]| {
            let mx = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let p = (0..10).find(|&i| a[i].norm() >= mx * (1.0 - 1e-6)).unwrap();
            let bm = b.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if b[p].norm() <= 1e-12 * bm {
                return f64::INFINITY;
            }
            (0..10).map(|i| (a[i] / a[p] - b[i] / b[p]).norm()).fold(0.0, f64::max)
        };
        one(&a, &b).max(one(&b, &a))
    }

    pub fn approx_eq(&self, other: &CubicForm, tol: f64) -> bool {
        if self.is_exact() && other.is_exact() {
            let a = self.normalized();
            let b = other.normalized();
            let p = self.coeffs.iter().position(|c| !c.is_zero()).unwrap();
            if other.coeffs[p].is_zero() {
                return false;
            }
            return a.coeffs.iter().zip(b.coeffs.iter()).all(|(x, y)| (x - y).is_zero());
        }
        self.distance(other) <= tol
    }

    pub fn eval_vec(&self, p: &[Scalar; 3]) -> Scalar {
        let [x, y, z] = p;
        let (x2, y2, z2) = (x * x, y * y, z * z);
        let mons = [
            &x2 * x,
            &x2 * y,
            &x2 * z,
            x * &y2,
            &(x * y) * z,
            x * &z2,
            &y2 * y,
            &y2 * z,
            y * &z2,
            &z2 * z,
        ];
        self.coeffs.iter().zip(mons.iter()).map(|(c, m)| c * m).sum()
    }

    /// Φ at the stored representative of `p`.
    pub fn evaluate(&self, p: &ProjPoint) -> Scalar {
        self.eval_vec(p.coords())
    }

    /// |Φ(p̂)| / max|coeff| at the normalized representative.
    pub fn residual(&self, p: &ProjPoint) -> f64 {
        self.evaluate(&p.normalized()).abs() / self.max_coeff()
    }

    pub fn contains(&self, p: &ProjPoint, tol: f64) -> bool {
        if self.is_exact() && p.is_exact() {
            return self.evaluate(p).is_zero();
        }
        self.residual(p) <= tol
    }

    pub fn gradient_vec(&self, p: &[Scalar; 3]) -> [Scalar; 3] {
        let poly = self.to_poly();
        std::array::from_fn(|i| poly.deriv(i).eval(p))
    }

    pub fn gradient(&self, p: &ProjPoint) -> [Scalar; 3] {
        self.gradient_vec(p.coords())
    }

    pub fn second_partials(&self, p: &[Scalar; 3]) -> [[Scalar; 3]; 3] {
        let poly = self.to_poly();
        let d: [Poly3; 3] = std::array::from_fn(|i| poly.deriv(i));
        std::array::from_fn(|i| std::array::from_fn(|j| d[i].deriv(j).eval(p)))
    }

    /// The Hessian determinant det(∂²Φ/∂xᵢ∂xⱼ), computed symbolically.
    ///
    /// Fails with `DegenerateForm` when it vanishes identically (Φ is a cone over three
    /// collinear points, e.g. x³ or x²y).
    pub fn hessian(&self) -> Result<CubicForm> {
        let poly = self.to_poly();
        let d: [Poly3; 3] = std::array::from_fn(|i| poly.deriv(i));
        let h: [[Poly3; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| d[i].deriv(j)));
        let minor = |a: usize, b: usize, c: usize, e: usize| h[1][a].mul(&h[2][b]).sub(&h[1][c].mul(&h[2][e]));
        let det = h[0][0]
            .mul(&minor(1, 2, 2, 1))
            .sub(&h[0][1].mul(&minor(0, 2, 2, 0)))
            .add(&h[0][2].mul(&minor(0, 1, 1, 0)));
        let form = CubicForm::from_poly(&det).map_err(|_| Error::DegenerateForm)?;
        if !self.is_exact() && form.max_coeff() <= 1e-13 * self.max_coeff().powi(3) {
            return Err(Error::DegenerateForm);
        }
        Ok(form)
    }

    /// Ψ = Φ ∘ A⁻¹, so that Ψ(A p) = Φ(p).
    pub fn transform(&self, a: &ProjMap) -> CubicForm {
        let inv = a.inverse();
        let p = self.to_poly().substitute(inv.rows());
        CubicForm::from_poly(&p).expect("invertible substitution keeps the form nonzero")
    }

    /// Φ ∘ M for an arbitrary matrix `M` given by rows (no inversion).
    pub fn pullback(&self, m: &ProjMap) -> CubicForm {
        CubicForm::from_poly(&self.to_poly().substitute(m.rows())).expect("invertible")
    }

    /// The tangent line ∇Φ(p)·(x, y, z) = 0.
    pub fn tangent_line(&self, p: &ProjPoint) -> Result<ProjLine> {
        let g = self.gradient(&p.normalized());
        let tiny = if g.iter().all(Scalar::is_exact) {
            g.iter().all(Scalar::is_zero)
        } else {
            g.iter().map(Scalar::abs).fold(0.0, f64::max) <= 1e-12 * self.max_coeff()
        };
        if tiny {
            return Err(Error::SingularAtFlex);
        }
        ProjLine::from_array(g).map(|l| l.normalized())
    }

    /// Coefficients of Φ(s·p + t·q) in the order s³, s²t, st², t³.
    pub fn restrict_to_line(&self, p: &[Scalar; 3], q: &[Scalar; 3]) -> [Scalar; 4] {
        [
            self.eval_vec(p),
            dot(&self.gradient_vec(p), q),
            dot(&self.gradient_vec(q), p),
            self.eval_vec(q),
        ]
    }

    /// Detects the Hesse and standard normal forms (up to scale).
    pub fn family(&self) -> Family {
        let c = &self.coeffs;
        let zero_except = |keep: &[usize]| (0..10).all(|i| keep.contains(&i) || c[i].is_zero());
        if zero_except(&[0, 4, 6, 9]) {
            if c[0].is_zero() && c[6].is_zero() && c[9].is_zero() && !c[4].is_zero() {
                return Family::Hesse(None);
            }
            if !c[0].is_zero() && c[0].approx_eq(&c[6], 0.0) && c[0].approx_eq(&c[9], 0.0) {
                return Family::Hesse(Some(-(&c[4] / &(Scalar::int(3) * &c[0]))));
            }
        }
        if zero_except(&[0, 5, 7, 9]) && !c[0].is_zero() && (&c[7] + &c[0]).is_zero() {
            return Family::Standard(&c[5] / &c[0], &c[9] / &c[0]);
        }
        Family::General
    }

    pub fn is_smooth(&self) -> Result<bool> {
        Ok(singular_points(self)?.is_empty())
    }
}

impl PartialEq for CubicForm {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other, crate::algebra::tolerance())
    }
}

impl fmt::Display for CubicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const NAMES: [&str; 10] = ["x^3", "x^2y", "x^2z", "xy^2", "xyz", "xz^2", "y^3", "y^2z", "yz^2", "z^3"];
        let mut first = true;
        for (c, n) in self.coeffs.iter().zip(NAMES) {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c.is_exact() {
                write!(f, "{c}{n}")?;
            } else {
                write!(f, "({c}){n}")?;
            }
        }
        Ok(())
    }
}

/// Φ(p), free-function form.
pub fn evaluate(phi: &CubicForm, p: &ProjPoint) -> Scalar {
    phi.evaluate(p)
}

/// Hessian determinant, free-function form.
pub fn hessian(phi: &CubicForm) -> Result<CubicForm> {
    phi.hessian()
}

/// Φ ∘ A⁻¹, free-function form.
pub fn transform(phi: &CubicForm, a: &ProjMap) -> CubicForm {
    phi.transform(a)
}
