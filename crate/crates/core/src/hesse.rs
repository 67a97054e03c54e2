//! The Hesse pencil x³+y³+z³ = 3kxyz: symmetries, J(k), the tetrahedral group acting on k,
//! and reduction of an arbitrary smooth cubic to a member of the pencil.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{poly, ProjMap, ProjPoint, Scalar};
use crate::cubic_form::{find_flexes, flex_lines, CubicForm};
use crate::error::{Error, Result};

/// ω = e^{2πi/3}, the cube root of unity written γ in formulas below.
pub fn omega() -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI / 3.0)
}

fn omega_pow(m: i64) -> Scalar {
    match m.rem_euclid(3) {
        0 => Scalar::one(),
        r => Scalar::Float(Complex64::from_polar(1.0, 2.0 * PI * r as f64 / 3.0)),
    }
}

#[derive(Clone, Debug)]
pub enum HesseParam {
    Finite(Scalar),
    Infinity,
}

impl HesseParam {
    pub fn int(k: i64) -> Self {
        HesseParam::Finite(Scalar::int(k))
    }

    pub fn complex(z: Complex64) -> Self {
        HesseParam::Finite(Scalar::Float(z))
    }

    pub fn finite(&self) -> Option<&Scalar> {
        match self {
            HesseParam::Finite(k) => Some(k),
            HesseParam::Infinity => None,
        }
    }

    /// False for k = ∞ and for k³ = 1 (|k³−1| ≤ 1e-9 when floating).
    pub fn is_smooth(&self) -> bool {
        match self {
            HesseParam::Infinity => false,
            HesseParam::Finite(k) => {
                let d = k.powi(3) - Scalar::one();
                if d.is_exact() {
                    !d.is_zero()
                } else {
                    d.abs() > 1e-9
                }
            }
        }
    }

    pub fn approx_eq(&self, other: &HesseParam, tol: f64) -> bool {
        match (self, other) {
            (HesseParam::Infinity, HesseParam::Infinity) => true,
            (HesseParam::Finite(a), HesseParam::Finite(b)) => {
                if a.is_exact() && b.is_exact() {
                    a.approx_eq(b, 0.0)
                } else {
                    (a.to_complex() - b.to_complex()).norm() <= tol * (1.0 + a.abs().max(b.abs()))
                }
            }
            _ => false,
        }
    }
}

impl PartialEq for HesseParam {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other, crate::algebra::tolerance())
    }
}

impl fmt::Display for HesseParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HesseParam::Finite(k) => write!(f, "{k}"),
            HesseParam::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for HesseParam {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            HesseParam::Finite(k) => k.serialize(s),
            HesseParam::Infinity => s.serialize_str("inf"),
        }
    }
}

/// Any scalar; non-finite values (e.g. "inf") read as ∞.
impl<'de> Deserialize<'de> for HesseParam {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let k = Scalar::deserialize(d)?;
        let z = k.to_complex();
        Ok(if z.re.is_finite() && z.im.is_finite() { HesseParam::Finite(k) } else { HesseParam::Infinity })
    }
}

impl std::str::FromStr for HesseParam {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if matches!(t, "inf" | "infinity" | "∞") {
            return Ok(HesseParam::Infinity);
        }
        t.parse::<Scalar>().map(HesseParam::Finite)
    }
}

/// Φ_k = x³+y³+z³−3kxyz, or xyz for k = ∞.
pub fn hesse_form(k: &HesseParam) -> CubicForm {
    let mut c: [Scalar; 10] = std::array::from_fn(|_| Scalar::zero());
    match k {
        HesseParam::Finite(k) => {
            c[0] = Scalar::one();
            c[6] = Scalar::one();
            c[9] = Scalar::one();
            c[4] = Scalar::int(-3) * k;
        }
        HesseParam::Infinity => c[4] = Scalar::one(),
    }
    CubicForm::new(c).expect("nonzero")
}

/// The nine base points (0:1:−γ), (−γ:0:1), (1:−γ:0) of the pencil.
pub fn exceptional_points() -> Vec<ProjPoint> {
    let mut out = Vec::with_capacity(9);
    for m in 0..3 {
        let g = -omega_pow(m);
        out.push(ProjPoint::new(Scalar::zero(), Scalar::one(), g.clone()).unwrap());
        out.push(ProjPoint::new(g.clone(), Scalar::zero(), Scalar::one()).unwrap());
        out.push(ProjPoint::new(Scalar::one(), g, Scalar::zero()).unwrap());
    }
    out
}

#[derive(Clone, Debug)]
pub struct SymmetryElement {
    pub map: ProjMap,
    /// Member of the translation subgroup N ≅ ℤ/3 ⊕ ℤ/3.
    pub in_n: bool,
}

fn closure<T: Clone>(gens: &[T], id: T, mul: impl Fn(&T, &T) -> T, eq: impl Fn(&T, &T) -> bool) -> Vec<T> {
    let mut out = vec![id];
    let mut i = 0;
    while i < out.len() {
        for g in gens {
            let n = mul(g, &out[i]);
            if !out.iter().any(|e| eq(e, &n)) {
                out.push(n);
            }
        }
        i += 1;
    }
    out
}

/// The 18 projective maps generated by the cyclic permutation, diag(1, γ, γ²) and x↔y.
pub fn symmetry_group() -> Vec<SymmetryElement> {
    let cyc = ProjMap::from_ints([[0, 0, 1], [1, 0, 0], [0, 1, 0]]).unwrap();
    let diag = ProjMap::diagonal([Scalar::one(), omega_pow(1), omega_pow(2)]).unwrap();
    let swap = ProjMap::from_ints([[0, 1, 0], [1, 0, 0], [0, 0, 1]]).unwrap();
    let mul = |a: &ProjMap, b: &ProjMap| a.compose(b).normalized();
    let eq = |a: &ProjMap, b: &ProjMap| a.approx_eq(b, 1e-9);
    let n = closure(&[cyc.clone(), diag.clone()], ProjMap::identity(), mul, eq);
    let all = closure(&[cyc, diag, swap], ProjMap::identity(), mul, eq);
    all.into_iter()
        .map(|m| {
            let in_n = n.iter().any(|e| e.approx_eq(&m, 1e-9));
            SymmetryElement { map: m, in_n }
        })
        .collect()
}

/// J(𝒞(k)) = (k(k³+8) / (4(k³−1)))³.
pub fn j_of_k(k: &HesseParam) -> Result<Scalar> {
    if !k.is_smooth() {
        return Err(Error::SingularParameter);
    }
    let k = k.finite().unwrap();
    let k3 = k.powi(3);
    let num = k * &(&k3 + &Scalar::int(8));
    let den = Scalar::int(4) * (&k3 - &Scalar::one());
    Ok((num / den).powi(3))
}

/// Coefficients (descending, degree 12) of k³(k³+8)³ − 64·J·(k³−1)³, whose roots are the
/// parameters with j_of_k(k) = J.
pub fn j_preimage_poly(j: Complex64) -> Vec<Complex64> {
    let c = |x: f64| Complex64::new(x, 0.0);
    // (k³+8)³ = k⁹ + 24k⁶ + 192k³ + 512 ; (k³−1)³ = k⁹ − 3k⁶ + 3k³ − 1
    let mut out = vec![c(0.0); 13];
    let lhs = [(12, 1.0), (9, 24.0), (6, 192.0), (3, 512.0)];
    let rhs = [(9, 1.0), (6, -3.0), (3, 3.0), (0, -1.0)];
    for (d, v) in lhs {
        out[12 - d] += c(v);
    }
    for (d, v) in rhs {
        out[12 - d] -= c(64.0 * v) * j;
    }
    out
}

/// The twelve solutions (with multiplicity) of j_of_k(k) = J.
pub fn k_from_j(j: Complex64) -> Result<Vec<Complex64>> {
    poly::roots(&j_preimage_poly(j))
}

/// k ↦ (ak+b)/(ck+d).
#[derive(Clone, Debug)]
pub struct MobiusMap {
    m: [[Scalar; 2]; 2],
}

impl MobiusMap {
    pub fn new(m: [[Scalar; 2]; 2]) -> Result<Self> {
        let d = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
        if d.is_zero() || (!d.is_exact() && d.abs() < 1e-14) {
            return Err(Error::SingularMap);
        }
        Ok(Self { m })
    }

    pub fn identity() -> Self {
        Self::new([[Scalar::one(), Scalar::zero()], [Scalar::zero(), Scalar::one()]]).unwrap()
    }

    /// η(k) = (k+2)/(k−1)
    pub fn eta() -> Self {
        Self::new([[Scalar::int(1), Scalar::int(2)], [Scalar::int(1), Scalar::int(-1)]]).unwrap()
    }

    /// ρ(k) = γk
    pub fn rho() -> Self {
        Self::new([[omega_pow(1), Scalar::zero()], [Scalar::zero(), Scalar::one()]]).unwrap()
    }

    pub fn matrix(&self) -> &[[Scalar; 2]; 2] {
        &self.m
    }

    pub fn det(&self) -> Scalar {
        &self.m[0][0] * &self.m[1][1] - &self.m[0][1] * &self.m[1][0]
    }

    pub fn apply(&self, k: &HesseParam) -> HesseParam {
        let [[a, b], [c, d]] = &self.m;
        match k {
            HesseParam::Infinity => {
                if c.is_zero() {
                    HesseParam::Infinity
                } else {
                    HesseParam::Finite(a / c)
                }
            }
            HesseParam::Finite(k) => {
                let num = a * k + b;
                let den = c * k + d;
                let vanishes = if den.is_exact() {
                    den.is_zero()
                } else {
                    den.abs() <= 1e-15 * ((c * k).abs() + d.abs())
                };
                if vanishes {
                    HesseParam::Infinity
                } else {
                    HesseParam::Finite(num / den)
                }
            }
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &MobiusMap) -> MobiusMap {
        let m = std::array::from_fn(|i| std::array::from_fn(|j| &self.m[i][0] * &other.m[0][j] + &self.m[i][1] * &other.m[1][j]));
        MobiusMap { m }
    }

    /// Equality up to a nonzero scalar factor.
    pub fn approx_eq(&self, other: &MobiusMap, tol: f64) -> bool {
        let a: Vec<Complex64> = self.m.iter().flatten().map(Scalar::to_complex).collect();
        let b: Vec<Complex64> = other.m.iter().flatten().map(Scalar::to_complex).collect();
        let p = (0..4).max_by(|&i, &j| a[i].norm().partial_cmp(&a[j].norm()).unwrap()).unwrap();
        if b[p].norm() == 0.0 {
            return false;
        }
        (0..4).all(|i| (a[i] / a[p] - b[i] / b[p]).norm() <= tol)
    }
}

/// η(k) = (k+2)/(k−1), with 1 ↔ ∞.
pub fn eta(k: &HesseParam) -> HesseParam {
    MobiusMap::eta().apply(k)
}

/// A Möbius element of Γ together with a projective map carrying 𝒞(k) onto 𝒞(μ(k)).
#[derive(Clone, Debug)]
pub struct LiftedMobius {
    pub mobius: MobiusMap,
    pub lift: ProjMap,
}

/// Projective lifts: X = x+y+z, Y = x+γy+γ̄z, Z = x+γ̄y+γz realizes η; diag(1, 1, γ̄) realizes ρ.
fn generator_lifts() -> [LiftedMobius; 2] {
    let (g, gb) = (omega_pow(1), omega_pow(2));
    let e = ProjMap::new([
        [Scalar::one(), Scalar::one(), Scalar::one()],
        [Scalar::one(), g.clone(), gb.clone()],
        [Scalar::one(), gb.clone(), g],
    ])
    .unwrap();
    let r = ProjMap::diagonal([Scalar::one(), Scalar::one(), gb]).unwrap();
    [
        LiftedMobius { mobius: MobiusMap::eta(), lift: e },
        LiftedMobius { mobius: MobiusMap::rho(), lift: r },
    ]
}

/// The 12 elements of Γ = ⟨η, ρ⟩, each with a lift to a projective map.
pub fn tetrahedral_lifts() -> Vec<LiftedMobius> {
    let gens = generator_lifts();
    closure(
        &gens,
        LiftedMobius { mobius: MobiusMap::identity(), lift: ProjMap::identity() },
        |g, e| LiftedMobius { mobius: g.mobius.compose(&e.mobius), lift: g.lift.compose(&e.lift).normalized() },
        |a, b| a.mobius.approx_eq(&b.mobius, 1e-9),
    )
}

/// The tetrahedral group Γ: the 12 Möbius maps permuting {1, γ, γ̄, ∞}.
pub fn tetrahedral_group() -> Vec<MobiusMap> {
    tetrahedral_lifts().into_iter().map(|l| l.mobius).collect()
}

/// The Γ-orbit of k, one entry per group element (so repeated values appear).
pub fn gamma_orbit(k: &HesseParam) -> Vec<HesseParam> {
    tetrahedral_group().iter().map(|m| m.apply(k)).collect()
}

/// (1/64) ∏_{μ∈Γ} μ(k), which equals J(k).
pub fn orbit_product(k: &HesseParam) -> Result<Scalar> {
    let mut prod = Scalar::one();
    for v in gamma_orbit(k) {
        match v {
            HesseParam::Finite(x) => prod = prod * x,
            HesseParam::Infinity => return Err(Error::SingularParameter),
        }
    }
    Ok(prod / Scalar::int(64))
}

fn canonical_key(k: Complex64) -> (f64, f64) {
    let mut arg = k.arg();
    if arg <= -PI + 1e-9 {
        arg = PI;
    }
    (k.norm(), arg)
}

/// Orbit element with the smallest (|k|, arg k), with the lift realizing it.
pub fn canonical_representative(k: &HesseParam) -> Option<(HesseParam, LiftedMobius)> {
    let mut best: Option<(HesseParam, LiftedMobius, (f64, f64))> = None;
    for l in tetrahedral_lifts() {
        let v = l.mobius.apply(k);
        let Some(x) = v.finite() else { continue };
        let key = canonical_key(x.to_complex());
        let better = match &best {
            None => true,
            Some((_, _, b)) => {
                if (key.0 - b.0).abs() > 1e-9 * (1.0 + b.0) {
                    key.0 < b.0
                } else {
                    key.1 < b.1 - 1e-9
                }
            }
        };
        if better {
            best = Some((v, l, key));
        }
    }
    best.map(|(v, l, _)| (v, l))
}

const OFF_PATTERN_TOL: f64 = 1e-6;
const HESSE_RESIDUAL: f64 = 1e-8;

/// Reduction to Hesse form: returns k and A with transform(Φ, A) ∝ Φ_k.
///
/// The two lexicographically smallest flexes span a flex line ℓ₀; the two flex lines
/// disjoint from ℓ₀ complete a triangle containing all nine flexes. Sending that triangle
/// to xyz = 0 leaves αx³+βy³+γz³+δxyz, and a diagonal rescaling finishes the job.
/// With `canonical`, k is replaced by its canonical Γ-orbit representative.
pub fn to_hesse(phi: &CubicForm, canonical: bool) -> Result<(HesseParam, ProjMap)> {
    let flexes = find_flexes(phi)?;
    let lines = flex_lines(&flexes);
    if lines.len() != 12 {
        return Err(Error::ConvergenceFailure(format!("found {} flex lines", lines.len())));
    }
    let l0 = *lines
        .iter()
        .find(|l| l.contains(&0) && l.contains(&1))
        .ok_or_else(|| Error::ConvergenceFailure("flex configuration".into()))?;
    let mut parallel: Vec<[usize; 3]> = lines.iter().filter(|l| l.iter().all(|i| !l0.contains(i))).copied().collect();
    if parallel.len() != 2 {
        return Err(Error::ConvergenceFailure("flex configuration".into()));
    }
    parallel.sort_by_key(|l| l[0]);
    let pts = flexes.points();
    let line_vec = |l: &[usize; 3]| crate::algebra::line_through(&pts[l[0]], &pts[l[1]]).map(|v| v.coords().clone());
    let a = ProjMap::new([line_vec(&parallel[0])?, line_vec(&parallel[1])?, line_vec(&l0)?])?;
    let psi = phi.transform(&a).normalized();
    let c = psi.to_complex();
    let off = [1, 2, 3, 5, 7, 8].iter().map(|&i| c[i].norm()).fold(0.0, f64::max);
    if off > OFF_PATTERN_TOL {
        return Err(Error::ConvergenceFailure(format!("triangle reduction left {off:.3e}")));
    }
    let roots = [c[0], c[6], c[9]].map(crate::algebra::scalar::principal_cbrt);
    if roots.iter().any(|r| r.norm() < 1e-6) {
        return Err(Error::ConvergenceFailure("vanishing cube coefficient".into()));
    }
    let k = -c[4] / (3.0 * roots[0] * roots[1] * roots[2]);
    let d = ProjMap::diagonal(roots.map(Scalar::Float))?;
    let mut total = d.compose(&a).normalized();
    let mut kp = HesseParam::complex(k);
    if canonical {
        if let Some((v, l)) = canonical_representative(&kp) {
            total = l.lift.compose(&total).normalized();
            kp = v;
        }
    }
    let r = phi.transform(&total).distance(&hesse_form(&kp));
    if !(r < HESSE_RESIDUAL) {
        return Err(Error::ConvergenceFailure(format!("Hesse residual {r:.3e}")));
    }
    Ok((kp, total))
}
