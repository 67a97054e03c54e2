//! Homogeneous polynomials in x, y, z over `Scalar`, plus a complex-only numeric mirror.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::algebra::Scalar;

pub type Exponent = [u8; 3];

#[derive(Clone, Debug, Default)]
pub struct Poly3 {
    terms: BTreeMap<Exponent, Scalar>,
}

impl Poly3 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Exponent, Scalar)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// `u x + v y + w z`
    pub fn linear(l: &[Scalar; 3]) -> Self {
        Self::from_terms([
            ([1, 0, 0], l[0].clone()),
            ([0, 1, 0], l[1].clone()),
            ([0, 0, 1], l[2].clone()),
        ])
    }

    pub fn constant(c: Scalar) -> Self {
        Self::from_terms([([0, 0, 0], c)])
    }

    fn add_term(&mut self, e: Exponent, c: Scalar) {
        let entry = self.terms.entry(e).or_insert_with(Scalar::zero);
        *entry = &*entry + &c;
        if entry.is_exact() && entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: Exponent) -> Scalar {
        self.terms.get(&e).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(Scalar::is_zero)
    }

    pub fn add(&self, other: &Poly3) -> Poly3 {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly3) -> Poly3 {
        self.add(&other.scale(&Scalar::int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> Poly3 {
        Poly3::from_terms(self.terms.iter().map(|(e, c)| (*e, c * s)))
    }

    pub fn mul(&self, other: &Poly3) -> Poly3 {
        let mut out = Poly3::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term([ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]], ca * cb);
            }
        }
        out
    }

    /// Partial derivative with respect to variable `i` (0 = x, 1 = y, 2 = z).
    pub fn deriv(&self, i: usize) -> Poly3 {
        Poly3::from_terms(self.terms.iter().filter(|(e, _)| e[i] > 0).map(|(e, c)| {
            let mut f = *e;
            f[i] -= 1;
            (f, c * &Scalar::int(e[i] as i64))
        }))
    }

    pub fn eval(&self, p: &[Scalar; 3]) -> Scalar {
        let mut pw: [Vec<Scalar>; 3] = std::array::from_fn(|_| vec![Scalar::one()]);
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = c.clone();
                for i in 0..3 {
                    while pw[i].len() <= e[i] as usize {
                        let next = pw[i].last().unwrap() * &p[i];
                        pw[i].push(next);
                    }
                    t = t * &pw[i][e[i] as usize];
                }
                t
            })
            .sum()
    }

    /// Substitute `x_i -> sum_j m[i][j] x_j`.
    pub fn substitute(&self, m: &[[Scalar; 3]; 3]) -> Poly3 {
        let lin: [Poly3; 3] = std::array::from_fn(|i| Poly3::linear(&m[i]));
        let mut pw: [Vec<Poly3>; 3] = std::array::from_fn(|_| vec![Poly3::constant(Scalar::one())]);
        let mut out = Poly3::zero();
        for (e, c) in &self.terms {
            let mut t = Poly3::constant(c.clone());
            for i in 0..3 {
                while pw[i].len() <= e[i] as usize {
                    let next = pw[i].last().unwrap().mul(&lin[i]);
                    pw[i].push(next);
                }
                t = t.mul(&pw[i][e[i] as usize]);
            }
            out = out.add(&t);
        }
        out
    }

    pub fn to_numeric(&self) -> NumForm {
        NumForm { terms: self.terms.iter().map(|(e, c)| (*e, c.to_complex())).collect() }
    }
}

/// Complex floating homogeneous polynomial used by the numerical solvers.
#[derive(Clone, Debug)]
pub struct NumForm {
    pub terms: Vec<(Exponent, Complex64)>,
}

impl NumForm {
    pub fn eval(&self, p: &[Complex64; 3]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| c * p[0].powu(e[0] as u32) * p[1].powu(e[1] as u32) * p[2].powu(e[2] as u32))
            .sum()
    }

    pub fn grad(&self, p: &[Complex64; 3]) -> [Complex64; 3] {
        let mut g = [Complex64::new(0.0, 0.0); 3];
        for (e, c) in &self.terms {
            for i in 0..3 {
                if e[i] == 0 {
                    continue;
                }
                let mut t = c * e[i] as f64;
                for j in 0..3 {
                    let k = if j == i { e[j] - 1 } else { e[j] };
                    t *= p[j].powu(k as u32);
                }
                g[i] += t;
            }
        }
        g
    }

    pub fn max_coeff(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max)
    }

    /// Coefficients in z (descending) of the dehomogenization at y = 1, x = `x`.
    pub fn z_poly(&self, x: Complex64, degree: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); degree + 1];
        for (e, c) in &self.terms {
            out[degree - e[2] as usize] += c * x.powu(e[0] as u32);
        }
        out
    }

    /// Linear combination of forms of equal degree.
    pub fn combine(parts: &[(&NumForm, Complex64)]) -> NumForm {
        let mut map: BTreeMap<Exponent, Complex64> = BTreeMap::new();
        for (f, w) in parts {
            for (e, c) in &f.terms {
                *map.entry(*e).or_insert(Complex64::new(0.0, 0.0)) += c * w;
            }
        }
        NumForm { terms: map.into_iter().collect() }
    }

    /// Substitute `x_i -> sum_j m[i][j] x_j`.
    pub fn substitute(&self, m: &[[Complex64; 3]; 3]) -> NumForm {
        let p = Poly3::from_terms(self.terms.iter().map(|(e, c)| (*e, Scalar::Float(*c))));
        p.substitute(&m.map(|r| r.map(Scalar::Float))).to_numeric()
    }
}
