//! Subcommands of the `cubica` binary.

use std::io::Write as _;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{ArgGroup, Args, Parser, Subcommand};
use cubica::group_law::CurvePoint;
use cubica::hesse::{gamma_orbit, orbit_product};
use cubica::lattice::{eisenstein, torus_symmetry_order};
use cubica::standard::automorphism_order;
use cubica::{
    chord_tangent, classify_real, cross_ratio_chi, exact_flex, find_flexes, j_of_k, lattice_to_curve, singular_points, to_hesse,
    to_standard, voronoi_cell, BasedGroup, CubicForm, Error, Family, HesseParam, Lattice, ProjPoint, Scalar,
    StandardCurve,
};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::render::{self, Figure, RenderSpec};

#[derive(Debug, Parser)]
#[command(name = "cubica", version, about = "Computations with plane cubic curves")]
pub struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// A curve given as a JSON file (or inline JSON), a Hesse parameter or a standard form.
#[derive(Debug, Args)]
#[command(group(ArgGroup::new("curve_input").required(true).args(["curve", "hesse", "standard"])))]
pub struct CurveArgs {
    /// JSON file (or inline JSON): {"coeffs": [...]}, {"hesse": k} or {"standard": [a, b]}
    #[arg(long)]
    pub curve: Option<String>,
    /// x³ + y³ + z³ − 3k·xyz ("inf" for xyz)
    #[arg(long, allow_hyphen_values = true)]
    pub hesse: Option<String>,
    /// y² = x³ + ax + b, written "a,b"
    #[arg(long, allow_hyphen_values = true)]
    pub standard: Option<String>,
}

#[derive(Debug, Args)]
pub struct SvgArgs {
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Canvas width and height in pixels (at least 64).
    #[arg(long, default_value_t = render::DEFAULT_CANVAS)]
    pub size: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The nine flex points.
    Flexes(CurveArgs),
    /// Singular points (empty for a smooth curve).
    Singular(CurveArgs),
    /// The J-invariant.
    JInvariant(CurveArgs),
    /// Reduce to y² = x³ + ax + b from a flex.
    ToStandard {
        #[command(flatten)]
        curve: CurveArgs,
        /// Index into the sorted flex list.
        #[arg(long)]
        flex: Option<usize>,
    },
    /// Reduce to Hesse form x³ + y³ + z³ − 3k·xyz.
    ToHesse {
        #[command(flatten)]
        curve: CurveArgs,
        /// Replace k by its canonical representative under the tetrahedral group.
        #[arg(long)]
        canonical: bool,
    },
    /// J of the Hesse curve with parameter k.
    HesseJ {
        #[arg(long, allow_hyphen_values = true)]
        k: String,
    },
    /// The twelve images of k under the tetrahedral group and their product / 64.
    HesseOrbit {
        #[arg(long, allow_hyphen_values = true)]
        k: String,
    },
    /// p + q in the group with zero `base`.
    Add {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
    },
    /// n·p in the group with zero `base`.
    Mul {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, allow_hyphen_values = true)]
        base: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
    },
    /// Third intersection of the tangent at p.
    Tangent {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
    },
    /// Real Hesse parameter, signs and component count of a real cubic.
    ClassifyReal(CurveArgs),
    /// The cross-ratio χ of a two-component real curve.
    Chi {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// g₂, g₃, the curve and the Voronoi cell of ℤ + τℤ.
    LatticeCurve {
        /// "re,im" or a complex literal
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
    },
    /// Real members of the Hesse pencil in the hemisphere model.
    PencilSvg {
        /// Comma-separated k values ("inf" allowed); a default sweep when omitted.
        #[arg(long, allow_hyphen_values = true)]
        k: Option<String>,
        #[command(flatten)]
        svg: SvgArgs,
    },
    /// Graph of k ↦ J(k) for real k.
    JgraphSvg {
        #[command(flatten)]
        svg: SvgArgs,
    },
    /// Canonical affine picture of the real curve with parameter k.
    CanonicalSvg {
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[command(flatten)]
        svg: SvgArgs,
    },
    /// Triangle of roots of x³ + ax + b.
    TriangleSvg {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[command(flatten)]
        svg: SvgArgs,
    },
    /// Voronoi cell of ℤ + τℤ.
    VoronoiSvg {
        #[arg(long, allow_hyphen_values = true)]
        tau: String,
        #[command(flatten)]
        svg: SvgArgs,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 invalid input, 3 domain error, 4 convergence failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Json(_) => 2,
            CliError::Core(e) => match e {
                Error::Parse(_)
                | Error::InvalidInput(_)
                | Error::InvalidCanvas(_)
                | Error::ZeroForm
                | Error::ZeroVector
                | Error::NotOnCurve(_)
                | Error::CurveMismatch => 2,
                Error::ConvergenceFailure(_) => 4,
                _ => 3,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// What a command produced: text for people, JSON for machines, or an SVG document.
#[derive(Debug)]
pub enum Output {
    Report { text: String, json: Value },
    Svg { doc: String, path: Option<PathBuf> },
}

pub fn parse_scalar(s: &str) -> CliResult<Scalar> {
    Ok(s.trim().parse::<Scalar>()?)
}

/// "re,im" or any scalar literal.
pub fn parse_complex(s: &str) -> CliResult<Complex64> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [re, im] => Ok(Complex64::new(parse_scalar(re)?.re(), parse_scalar(im)?.re())),
        [one] => Ok(parse_scalar(one)?.to_complex()),
        _ => Err(Error::Parse(format!("expected a complex number, got {s:?}")).into()),
    }
}

/// "x,y,z", "x:y:z", or affine "x,y".
pub fn parse_point(s: &str) -> CliResult<ProjPoint> {
    let parts: Vec<&str> = s.split([',', ':']).collect();
    let c: Vec<Scalar> = parts.iter().map(|p| parse_scalar(p)).collect::<CliResult<_>>()?;
    let p = match c.len() {
        2 => ProjPoint::new(c[0].clone(), c[1].clone(), Scalar::one()),
        3 => ProjPoint::new(c[0].clone(), c[1].clone(), c[2].clone()),
        _ => return Err(Error::Parse(format!("expected 2 or 3 coordinates, got {s:?}")).into()),
    }?;
    Ok(p)
}

pub fn parse_k(s: &str) -> CliResult<HesseParam> {
    Ok(s.parse::<HesseParam>()?)
}

fn parse_pair(s: &str) -> CliResult<(Scalar, Scalar)> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [a, b] => Ok((parse_scalar(a)?, parse_scalar(b)?)),
        _ => Err(Error::Parse(format!("expected \"a,b\", got {s:?}")).into()),
    }
}

pub fn load_curve(args: &CurveArgs) -> CliResult<CubicForm> {
    if let Some(k) = &args.hesse {
        return Ok(cubica::hesse_form(&parse_k(k)?));
    }
    if let Some(ab) = &args.standard {
        let (a, b) = parse_pair(ab)?;
        return Ok(StandardCurve::new(a, b).to_form());
    }
    let src = args.curve.as_deref().ok_or_else(|| Error::InvalidInput("no curve given".into()))?;
    let text = if src.trim_start().starts_with('{') { src.to_string() } else { std::fs::read_to_string(src)? };
    Ok(serde_json::from_str(&text)?)
}

fn report(text: String, json: Value) -> Output {
    Output::Report { text, json }
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn points_text(pts: &[ProjPoint]) -> String {
    pts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("\n")
}

/// The i-th flex, snapped to an exact rational point when the curve is exact.
fn nth_flex(phi: &CubicForm, i: usize) -> CliResult<ProjPoint> {
    let pts = find_flexes(phi)?.points();
    let p = pts.get(i).ok_or_else(|| Error::InvalidInput(format!("flex index {i} out of range")))?;
    Ok(exact_flex(phi, p).unwrap_or_else(|| p.clone()))
}

/// J of an arbitrary cubic, exact for exact Hesse and standard forms.
pub fn curve_j(phi: &CubicForm) -> CliResult<Scalar> {
    let j = match phi.family() {
        Family::Hesse(Some(k)) => j_of_k(&HesseParam::Finite(k))?,
        Family::Hesse(None) => return Err(Error::SingularCurve.into()),
        Family::Standard(a, b) => StandardCurve::new(a, b).j_invariant()?,
        Family::General => {
            to_standard(phi, &nth_flex(phi, 0)?)?.0.j_invariant()?
        }
    };
    Ok(j)
}

fn group_for(phi: CubicForm, base: &Option<String>) -> CliResult<BasedGroup> {
    let base = match base {
        Some(b) => parse_point(b)?,
        None => match phi.family() {
            Family::Standard(..) => ProjPoint::from_ints(0, 1, 0)?,
            _ => nth_flex(&phi, 0)?,
        },
    };
    Ok(BasedGroup::new(phi, base)?)
}

fn svg(doc: String, args: &SvgArgs) -> Output {
    Output::Svg { doc, path: args.output.clone() }
}

fn render_to(figure: Figure, args: &SvgArgs) -> CliResult<Output> {
    let doc = render::render(&RenderSpec::new(figure, args.size))?;
    Ok(svg(doc, args))
}

pub fn run(cli: &Cli) -> CliResult<Output> {
    match &cli.command {
        Command::Flexes(c) => {
            let phi = load_curve(c)?;
            let f = find_flexes(&phi)?;
            let pts = f.points();
            let json = json!({ "flexes": to_json(&pts), "max_residual": f.max_residual() });
            Ok(report(points_text(&pts), json))
        }
        Command::Singular(c) => {
            let phi = load_curve(c)?;
            let pts = singular_points(&phi)?;
            let text = if pts.is_empty() { "smooth".to_string() } else { points_text(&pts) };
            Ok(report(text, json!({ "singular_points": to_json(&pts) })))
        }
        Command::JInvariant(c) => {
            let j = curve_j(&load_curve(c)?)?;
            Ok(report(format!("J = {j}"), json!({ "J": to_json(&j) })))
        }
        Command::ToStandard { curve, flex } => {
            let phi = load_curve(curve)?;
            let p = match (flex, phi.family()) {
                (None, Family::Standard(..)) => ProjPoint::from_ints(0, 1, 0)?,
                (i, _) => nth_flex(&phi, i.unwrap_or(0))?,
            };
            let (c, a) = to_standard(&phi, &p)?;
            let j = c.j_invariant()?;
            let text = format!("{c}\nJ = {j}\nflex {p}");
            Ok(report(text, json!({ "a": to_json(&c.a), "b": to_json(&c.b), "J": to_json(&j), "flex": to_json(&p), "map": to_json(&a) })))
        }
        Command::ToHesse { curve, canonical } => {
            let phi = load_curve(curve)?;
            let (k, a) = to_hesse(&phi, *canonical)?;
            let j = j_of_k(&k)?;
            Ok(report(format!("k = {k}\nJ = {j}"), json!({ "k": to_json(&k), "J": to_json(&j), "map": to_json(&a) })))
        }
        Command::HesseJ { k } => {
            let k = parse_k(k)?;
            let j = j_of_k(&k)?;
            Ok(report(format!("J = {j}"), json!({ "k": to_json(&k), "J": to_json(&j) })))
        }
        Command::HesseOrbit { k } => {
            let k = parse_k(k)?;
            let orbit = gamma_orbit(&k);
            let prod = orbit_product(&k)?;
            let j = j_of_k(&k)?;
            let mut text: Vec<String> = orbit.iter().map(|v| v.to_string()).collect();
            text.push(format!("product/64 = {prod}"));
            text.push(format!("J = {j}"));
            Ok(report(text.join("\n"), json!({ "orbit": to_json(&orbit), "product_over_64": to_json(&prod), "J": to_json(&j) })))
        }
        Command::Add { curve, base, p, q } => {
            let g = group_for(load_curve(curve)?, base)?;
            let (p, q) = (g.point(parse_point(p)?)?, g.point(parse_point(q)?)?);
            let s = g.add(&p, &q)?;
            Ok(report(s.point().to_string(), json!({ "sum": to_json(&s), "base": to_json(g.base()) })))
        }
        Command::Mul { curve, base, n, p } => {
            let g = group_for(load_curve(curve)?, base)?;
            let p = g.point(parse_point(p)?)?;
            let r = g.multiply(*n, &p)?;
            Ok(report(r.point().to_string(), json!({ "n": n, "result": to_json(&r), "base": to_json(g.base()) })))
        }
        Command::Tangent { curve, p } => {
            let phi = Arc::new(load_curve(curve)?);
            let p = CurvePoint::new(phi.clone(), parse_point(p)?)?;
            let line = phi.tangent_line(p.point())?;
            let r = chord_tangent(&p, &p)?;
            Ok(report(format!("{}\ntangent {line}", r.point()), json!({ "point": to_json(&r), "tangent": to_json(&line) })))
        }
        Command::ClassifyReal(c) => {
            let r = classify_real(&load_curve(c)?)?;
            let text = format!(
                "k = {}\nJ = {}\nsign b = {}, sign a = {}\ncomponents = {}\nreal flexes: {}",
                r.k,
                r.j,
                r.sign_b,
                r.sign_a,
                r.components,
                r.real_flexes.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
            );
            Ok(report(text, to_json(&r)))
        }
        Command::Chi { a, b } => {
            let c = StandardCurve::new(parse_scalar(a)?, parse_scalar(b)?);
            let chi = cross_ratio_chi(&c)?;
            Ok(report(format!("chi = {}", render::num(chi.re())), json!({ "chi": chi.re() })))
        }
        Command::LatticeCurve { tau } => {
            let l = Lattice::from_tau(parse_complex(tau)?)?;
            let (g2, g3) = eisenstein(&l);
            let c = lattice_to_curve(&l)?;
            let j = c.j_invariant()?;
            let cell = voronoi_cell(&l);
            let order = torus_symmetry_order(&l);
            let aut = automorphism_order(&c).ok();
            let text = format!(
                "g2 = {g2}\ng3 = {g3}\n{c}\nJ = {j}\nVoronoi cell: {} vertices\nsymmetry order {order}",
                cell.len()
            );
            Ok(report(
                text,
                json!({
                    "g2": to_json(&g2), "g3": to_json(&g3), "a": to_json(&c.a), "b": to_json(&c.b), "J": to_json(&j),
                    "voronoi": to_json(&cell), "symmetry_order": order, "automorphism_order": aut,
                }),
            ))
        }
        Command::PencilSvg { k, svg } => {
            let ks = match k {
                None => render::default_pencil(),
                Some(list) => list.split(',').map(|s| render::real_k(&parse_k(s)?).map_err(CliError::from)).collect::<CliResult<_>>()?,
            };
            render_to(Figure::Pencil { ks }, svg)
        }
        Command::JgraphSvg { svg } => render_to(render::default_jgraph(), svg),
        Command::CanonicalSvg { k, svg } => render_to(Figure::Canonical { k: render::real_k(&parse_k(k)?)? }, svg),
        Command::TriangleSvg { a, b, svg } => {
            render_to(Figure::Triangle { a: parse_complex(a)?, b: parse_complex(b)? }, svg)
        }
        Command::VoronoiSvg { tau, svg } => render_to(Figure::Voronoi { tau: parse_complex(tau)? }, svg),
    }
}

/// Runs the command and writes its output; returns the process exit code.
pub fn execute(cli: &Cli) -> i32 {
    let result = run(cli).and_then(|out| emit(cli.json, out));
    match result {
        Ok(()) => 0,
        Err(e) => {
            if cli.json {
                println!("{}", json!({ "error": e.to_string(), "exit_code": e.exit_code() }));
            } else {
                eprintln!("error: {e}");
            }
            e.exit_code()
        }
    }
}

fn emit(as_json: bool, out: Output) -> CliResult<()> {
    let doc = match out {
        Output::Report { text, json } => {
            if as_json {
                serde_json::to_string_pretty(&json)? + "\n"
            } else {
                text + "\n"
            }
        }
        Output::Svg { doc, path: Some(p) } => return Ok(std::fs::write(p, doc)?),
        Output::Svg { doc, path: None } => doc,
    };
    let mut out = std::io::stdout().lock();
    match out.write_all(doc.as_bytes()).and_then(|_| out.flush()) {
        // a closed pipe (e.g. `| head`) is not an error
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}
