//! SVG figures: the real Hesse pencil, the graph of J(k), canonical pictures of real
//! cubics, root triangles and Voronoi cells.
//!
//! Output is deterministic: sampling grids are fixed and every number is written with
//! six significant digits.

use std::fmt::Write as _;

use cubica::contour::{self, Grid, Pt};
use cubica::lattice::{torus_symmetry_order, voronoi_cell, Lattice};
use cubica::real::canonical_picture;
use cubica::standard::triangle_shape;
use cubica::{Error, HesseParam, Result, Scalar, StandardCurve};
use num_complex::Complex64;

pub const MIN_CANVAS: u32 = 64;
pub const DEFAULT_CANVAS: u32 = 512;
/// Marching-squares resolution for the pencil figure.
pub const PENCIL_GRID: usize = 512;
const CANONICAL_GRID: usize = 400;
const CANONICAL_WINDOW: f64 = 3.0;

#[derive(Clone, Debug, PartialEq)]
pub enum Figure {
    /// Real members of the Hesse pencil; `None` is k = ∞.
    Pencil { ks: Vec<Option<f64>> },
    /// Graph of k ↦ J over the given ranges.
    Jgraph { k_range: (f64, f64), j_range: (f64, f64) },
    Canonical { k: Option<f64> },
    Triangle { a: Complex64, b: Complex64 },
    Voronoi { tau: Complex64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RenderSpec {
    pub figure: Figure,
    /// Width and height in pixels.
    pub canvas: u32,
}

impl RenderSpec {
    pub fn new(figure: Figure, canvas: u32) -> Self {
        Self { figure, canvas }
    }
}

pub fn default_pencil() -> Vec<Option<f64>> {
    [-3.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0].into_iter().map(Some).chain([None]).collect()
}

pub fn default_jgraph() -> Figure {
    Figure::Jgraph { k_range: (-3.0, 4.0), j_range: (-1.0, 2.0) }
}

pub fn render(spec: &RenderSpec) -> Result<String> {
    if spec.canvas < MIN_CANVAS {
        return Err(Error::InvalidCanvas(spec.canvas));
    }
    let size = spec.canvas as f64;
    match &spec.figure {
        Figure::Pencil { ks } => Ok(render_pencil(ks, size)),
        Figure::Jgraph { k_range, j_range } => render_jgraph(*k_range, *j_range, size),
        Figure::Canonical { k } => Ok(render_canonical(*k, size)),
        Figure::Triangle { a, b } => render_triangle(*a, *b, size),
        Figure::Voronoi { tau } => render_voronoi(*tau, size),
    }
}

/// Six significant digits, no exponent, trailing zeros trimmed, no negative zero.
pub fn num(x: f64) -> String {
    if !x.is_finite() {
        return "0".into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (5 - mag).clamp(0, 17) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Minimal SVG document builder.
struct Svg {
    size: f64,
    body: String,
}

impl Svg {
    fn new(size: f64, title: &str) -> Self {
        let mut s = Self { size, body: String::new() };
        writeln!(s.body, "<title>{}</title>", escape(title)).unwrap();
        writeln!(s.body, r##"<rect x="0" y="0" width="{0}" height="{0}" fill="#ffffff"/>"##, num(size)).unwrap();
        s
    }

    fn line(&mut self, a: Pt, b: Pt, attrs: &str) {
        writeln!(
            self.body,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" {attrs}/>"#,
            num(a.0),
            num(a.1),
            num(b.0),
            num(b.1)
        )
        .unwrap();
    }

    fn circle(&mut self, c: Pt, r: f64, attrs: &str) {
        writeln!(self.body, r#"<circle cx="{}" cy="{}" r="{}" {attrs}/>"#, num(c.0), num(c.1), num(r)).unwrap();
    }

    fn text(&mut self, p: Pt, s: &str, attrs: &str) {
        writeln!(self.body, r#"<text x="{}" y="{}" {attrs}>{}</text>"#, num(p.0), num(p.1), escape(s)).unwrap();
    }

    /// One path element for a set of polylines.
    fn polylines(&mut self, lines: &[Vec<Pt>], attrs: &str) {
        if lines.is_empty() {
            return;
        }
        let mut d = String::new();
        for l in lines {
            for (i, p) in l.iter().enumerate() {
                let _ = write!(d, "{}{} {}", if i == 0 { "M" } else { " L" }, num(p.0), num(p.1));
            }
            d.push(' ');
        }
        writeln!(self.body, r#"<path d="{}" fill="none" {attrs}/>"#, d.trim_end()).unwrap();
    }

    fn polygon(&mut self, pts: &[Pt], attrs: &str) {
        let p: Vec<String> = pts.iter().map(|p| format!("{},{}", num(p.0), num(p.1))).collect();
        writeln!(self.body, r#"<polygon points="{}" {attrs}/>"#, p.join(" ")).unwrap();
    }

    fn finish(self) -> String {
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{0}\" viewBox=\"0 0 {0} {0}\">\n{1}</svg>\n",
            num(self.size),
            self.body
        )
    }
}

/// Maps a square world window [-w, w]² to the canvas with a margin, y up.
#[derive(Clone, Copy)]
struct View {
    cx: f64,
    cy: f64,
    half: f64,
    size: f64,
}

impl View {
    fn px(&self, p: Pt) -> Pt {
        let s = 0.45 * self.size / self.half;
        (self.size / 2.0 + (p.0 - self.cx) * s, self.size / 2.0 - (p.1 - self.cy) * s)
    }

    fn lines(&self, ls: &[Vec<Pt>]) -> Vec<Vec<Pt>> {
        ls.iter().map(|l| l.iter().map(|&p| self.px(p)).collect()).collect()
    }
}

fn k_label(k: Option<f64>) -> String {
    k.map_or("inf".into(), num)
}

/// Orthonormal frame whose third axis is (1,1,1)/√3, so cyclic coordinate shifts become
/// 120° rotations of the picture.
fn pencil_frame() -> [[f64; 3]; 3] {
    let (s2, s3, s6) = (2f64.sqrt(), 3f64.sqrt(), 6f64.sqrt());
    [[1.0 / s2, -1.0 / s2, 0.0], [1.0 / s6, 1.0 / s6, -2.0 / s6], [1.0 / s3, 1.0 / s3, 1.0 / s3]]
}

/// Point of ℙ²(ℝ) for a disc point (u, v) of the upper-hemisphere orthographic view.
fn lift(u: f64, v: f64) -> Option<[f64; 3]> {
    let r2 = u * u + v * v;
    if r2 > 1.0 {
        return None;
    }
    let w = (1.0 - r2).sqrt();
    let f = pencil_frame();
    Some(std::array::from_fn(|i| u * f[0][i] + v * f[1][i] + w * f[2][i]))
}

fn project(p: [f64; 3]) -> Pt {
    let f = pencil_frame();
    let d = |r: &[f64; 3]| r[0] * p[0] + r[1] * p[1] + r[2] * p[2];
    let n = d(&f[0]).hypot(d(&f[1])).hypot(d(&f[2]));
    let s = if d(&f[2]) < 0.0 { -1.0 } else { 1.0 } / n;
    (s * d(&f[0]), s * d(&f[1]))
}

fn render_pencil(ks: &[Option<f64>], size: f64) -> String {
    let view = View { cx: 0.0, cy: 0.0, half: 1.0, size };
    let mut svg = Svg::new(size, "real Hesse pencil");
    svg.circle(view.px((0.0, 0.0)), 0.45 * size, r##"fill="none" stroke="#000000" stroke-width="1""##);
    let grid = Grid::square(1.0, PENCIL_GRID);
    for (i, k) in ks.iter().enumerate() {
        let f = |u: f64, v: f64| match lift(u, v) {
            None => f64::NAN,
            Some([x, y, z]) => match k {
                Some(k) => x * x * x + y * y * y + z * z * z - 3.0 * k * x * y * z,
                None => x * y * z,
            },
        };
        let lines = contour::polylines(&contour::segments(f, &grid));
        let hue = (i * 360 / ks.len().max(1)) as u32;
        let attrs = format!(r#"stroke="hsl({hue},70%,40%)" stroke-width="1" class="member" data-k="{}""#, k_label(*k));
        svg.polylines(&view.lines(&lines), &attrs);
    }
    for b in [[0.0, 1.0, -1.0], [-1.0, 0.0, 1.0], [1.0, -1.0, 0.0]] {
        let p = view.px(project(b));
        svg.circle(p, 4.0, r##"fill="#000000" class="base-point""##);
    }
    if ks.iter().any(|k| *k == Some(1.0)) {
        svg.circle(view.px(project([1.0, 1.0, 1.0])), 4.0, r##"fill="#c00000" class="singular-point" data-k="1""##);
    }
    svg.finish()
}

fn render_jgraph(k_range: (f64, f64), j_range: (f64, f64), size: f64) -> Result<String> {
    let (k0, k1) = k_range;
    let (j0, j1) = j_range;
    if !(k0 < k1 && j0 < j1) {
        return Err(Error::InvalidInput("empty plot range".into()));
    }
    let m = 0.08 * size;
    let px = |k: f64, j: f64| (m + (k - k0) / (k1 - k0) * (size - 2.0 * m), size - m - (j - j0) / (j1 - j0) * (size - 2.0 * m));
    let mut svg = Svg::new(size, "J as a function of real k");
    let axis = r##"stroke="#000000" stroke-width="1""##;
    if j0 <= 0.0 && 0.0 <= j1 {
        svg.line(px(k0, 0.0), px(k1, 0.0), axis);
    }
    if k0 <= 0.0 && 0.0 <= k1 {
        svg.line(px(0.0, j0), px(0.0, j1), axis);
    }
    if k0 < 1.0 && 1.0 < k1 {
        svg.line(px(1.0, j0), px(1.0, j1), r##"stroke="#808080" stroke-dasharray="4 4" class="asymptote" data-k="1""##);
    }
    let j = |k: f64| (k * (k * k * k + 8.0) / (4.0 * (k * k * k - 1.0))).powi(3);
    let n = 4 * size as usize;
    let mut branches: Vec<Vec<Pt>> = Vec::new();
    for (lo, hi) in [(k0, k1.min(1.0)), (k0.max(1.0), k1)] {
        if lo >= hi {
            continue;
        }
        let mut cur: Vec<Pt> = Vec::new();
        for i in 0..=n {
            let k = lo + (hi - lo) * i as f64 / n as f64;
            let v = j(k);
            if v.is_finite() && (j0..=j1).contains(&v) {
                cur.push(px(k, v));
            } else if cur.len() > 1 {
                branches.push(std::mem::take(&mut cur));
            } else {
                cur.clear();
            }
        }
        if cur.len() > 1 {
            branches.push(cur);
        }
    }
    svg.polylines(&branches, r##"stroke="#1f4e9a" stroke-width="1.5" class="graph""##);
    let s3 = 3f64.sqrt();
    for (k, jv, kl, jl) in [(0.0, 0.0, "0", "0"), (-2.0, 0.0, "-2", "0"), (1.0 - s3, 1.0, "1-sqrt3", "1"), (1.0 + s3, 1.0, "1+sqrt3", "1")] {
        if !(k0..=k1).contains(&k) || !(j0..=j1).contains(&jv) {
            continue;
        }
        let attrs = format!(r##"fill="#c00000" class="anchor" data-k="{}" data-j="{}" data-label="({kl}, {jl})""##, num(k), num(jv));
        svg.circle(px(k, jv), 3.5, &attrs);
    }
    svg.text((m, m * 0.7), "J(k)", r#"font-size="12""#);
    svg.text((size - m, size - m * 0.3), "k", r#"font-size="12""#);
    Ok(svg.finish())
}

/// Clips the infinite line p + t·d to the square [-w, w]².
fn clip_line(p: Pt, d: Pt, w: f64) -> Option<(Pt, Pt)> {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for (p, d) in [(p.0, d.0), (p.1, d.1)] {
        if d.abs() < 1e-15 {
            if p.abs() > w {
                return None;
            }
            continue;
        }
        let (a, b) = ((-w - p) / d, (w - p) / d);
        lo = lo.max(a.min(b));
        hi = hi.min(a.max(b));
    }
    (lo < hi).then(|| ((p.0 + lo * d.0, p.1 + lo * d.1), (p.0 + hi * d.0, p.1 + hi * d.1)))
}

fn render_canonical(k: Option<f64>, size: f64) -> String {
    let pic = canonical_picture(k, CANONICAL_WINDOW, CANONICAL_GRID);
    let w = CANONICAL_WINDOW;
    let view = View { cx: 0.0, cy: 0.0, half: w, size };
    let mut svg = Svg::new(size, &format!("canonical picture, k = {}", k_label(pic.k)));
    let faint = r##"stroke="#d0d0d0" stroke-width="1""##;
    svg.line(view.px((-w, 0.0)), view.px((w, 0.0)), faint);
    svg.line(view.px((0.0, -w)), view.px((0.0, w)), faint);
    for a in &pic.asymptotes {
        if let Some((p, q)) = clip_line(a.point, a.direction, w) {
            svg.line(view.px(p), view.px(q), r##"stroke="#808080" stroke-dasharray="5 4" class="asymptote""##);
        }
    }
    svg.polylines(&view.lines(&pic.branches), r##"stroke="#1f4e9a" stroke-width="1.5" class="curve""##);
    for p in &pic.isolated_points {
        svg.circle(view.px(*p), 3.5, r##"fill="#1f4e9a" class="isolated-point""##);
    }
    svg.circle(view.px((0.0, 1.0)), 2.5, r##"fill="#c00000" class="essential-marker""##);
    svg.text((8.0, 18.0), &format!("k = {}", k_label(pic.k)), r#"font-size="14""#);
    svg.finish()
}

fn scalar_label(s: &Scalar) -> String {
    if s.is_exact() {
        return s.to_string();
    }
    let z = s.to_complex();
    if z.im.abs() <= 1e-12 * z.norm().max(1.0) {
        num(z.re)
    } else {
        format!("{}{}{}i", num(z.re), if z.im < 0.0 { "-" } else { "+" }, num(z.im.abs()))
    }
}

/// Complex entries with zero imaginary part and integer value stay exact.
fn scalar_of(z: Complex64) -> Scalar {
    if z.im == 0.0 && z.re.fract() == 0.0 && z.re.abs() < 1e15 {
        Scalar::int(z.re as i64)
    } else {
        Scalar::Float(z)
    }
}

fn render_triangle(a: Complex64, b: Complex64, size: f64) -> Result<String> {
    let c = StandardCurve::new(scalar_of(a), scalar_of(b));
    let shape = triangle_shape(&c)?;
    let j = c.j_invariant()?;
    let v = shape.vertices;
    let reach = v.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-9);
    let view = View { cx: 0.0, cy: 0.0, half: 1.3 * reach, size };
    let mut svg = Svg::new(size, "root triangle of x^3 + ax + b");
    let pts: Vec<Pt> = v.iter().map(|z| view.px((z.re, z.im))).collect();
    svg.polygon(&pts, r##"fill="#e8eef8" stroke="#1f4e9a" stroke-width="1.5" class="triangle""##);
    for (i, (p, z)) in pts.iter().zip(&v).enumerate() {
        svg.circle(*p, 3.5, &format!(r##"fill="#1f4e9a" class="root" data-re="{}" data-im="{}""##, num(z.re), num(z.im)));
        svg.text((p.0 + 6.0, p.1 - 6.0), &format!("r{}", i + 1), r#"font-size="12""#);
    }
    let label = format!("J = {}", scalar_label(&j));
    svg.text((8.0, 18.0), &label, &format!(r#"font-size="14" class="j-annotation" data-j="{}""#, escape(&scalar_label(&j))));
    svg.text((8.0, 36.0), &shape.tag.to_string(), r#"font-size="12" class="shape""#);
    Ok(svg.finish())
}

fn render_voronoi(tau: Complex64, size: f64) -> Result<String> {
    let lattice = Lattice::from_tau(tau)?;
    let cell = voronoi_cell(&lattice);
    let (u, v) = lattice.reduced();
    let reach = 2.2 * u.norm().max(v.norm());
    let view = View { cx: 0.0, cy: 0.0, half: reach, size };
    let mut svg = Svg::new(size, "Voronoi cell of a lattice");
    let cellpts: Vec<Pt> = cell.vertices.iter().map(|z| view.px((z.re, z.im))).collect();
    svg.polygon(
        &cellpts,
        &format!(r##"fill="#e8eef8" stroke="#1f4e9a" stroke-width="1.5" class="voronoi" data-vertices="{}""##, cell.len()),
    );
    let n = (reach / u.norm().min(v.norm())).ceil() as i64 + 2;
    for i in -n..=n {
        for j in -n..=n {
            let w = u * i as f64 + v * j as f64;
            if w.re.abs() <= reach && w.im.abs() <= reach {
                svg.circle(view.px((w.re, w.im)), 2.5, r##"fill="#000000" class="lattice-point""##);
            }
        }
    }
    let o = view.px((0.0, 0.0));
    for g in [u, v] {
        svg.line(o, view.px((g.re, g.im)), r##"stroke="#c00000" stroke-width="1.5" class="generator""##);
    }
    let order = torus_symmetry_order(&lattice);
    svg.text((8.0, 18.0), &format!("tau = {}, symmetry order {order}", scalar_label(&Scalar::Float(tau))), r#"font-size="14""#);
    Ok(svg.finish())
}

/// Parses the Hesse parameter notation used on the command line ("inf" for ∞).
pub fn real_k(k: &HesseParam) -> Result<Option<f64>> {
    match k {
        HesseParam::Infinity => Ok(None),
        HesseParam::Finite(s) => {
            if !s.is_real(1e-12) {
                return Err(Error::ComplexCoefficients);
            }
            Ok(Some(s.re()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(num(0.0), "0");
        assert_eq!(num(-0.0), "0");
        assert_eq!(num(1.0), "1");
        assert_eq!(num(123.456789), "123.457");
        assert_eq!(num(-0.00123456789), "-0.00123457");
        assert_eq!(num(2.5), "2.5");
        assert_eq!(num(1234567.0), "1234567");
    }

    #[test]
    fn tiny_canvas_rejected() {
        let r = render(&RenderSpec::new(Figure::Canonical { k: Some(0.0) }, 32));
        assert_eq!(r.unwrap_err(), Error::InvalidCanvas(32));
    }

    #[test]
    fn frame_is_orthonormal() {
        let f = pencil_frame();
        for i in 0..3 {
            for j in 0..3 {
                let d: f64 = (0..3).map(|t| f[i][t] * f[j][t]).sum();
                assert!((d - if i == j { 1.0 } else { 0.0 }).abs() < 1e-15);
            }
        }
        let (u, v) = project([1.0, 1.0, 1.0]);
        assert!(u.abs() < 1e-15 && v.abs() < 1e-15);
    }

    #[test]
    fn triangle_annotation() {
        let svg = render(&RenderSpec::new(Figure::Triangle { a: 0.0.into(), b: 1.0.into() }, 256)).unwrap();
        assert!(svg.contains("J = 0"));
        assert!(svg.contains("equilateral"));
    }

    #[test]
    fn clipping() {
        let (p, q) = clip_line((0.0, 0.5), (1.0, 0.0), 2.0).unwrap();
        assert_eq!((p, q), ((-2.0, 0.5), (2.0, 0.5)));
        assert!(clip_line((0.0, 3.0), (1.0, 0.0), 2.0).is_none());
    }
}
