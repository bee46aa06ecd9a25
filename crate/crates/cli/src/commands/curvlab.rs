//! Curvature diagnostics for the metric models the lab can differentiate.
//!
//! A model document names the metric and, implicitly, the variety and the
//! class it sits in:
//!
//! * `{"model": "fs", "n": 2, "scale": "3"}` is `scale·dd^c log(1+|z|²)` on
//!   `P^n`, in the class `τ·scale·H`;
//! * `{"model": "radial", "n": 2, "profile": "p.csv", "eps": "1/10"}` is a
//!   U(n)-invariant potential over the round metric in `τ(n+1)H + εH`;
//! * `{"model": "product", "factors": ["2", "5"]}` is a product of two
//!   Fubini-Study lines on `P¹×P¹`, in `τ(s1·D1 + s2·D2)`.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use mylab::curvlab::{
    canonical_extension_curvature, chen_ogiue_check, curvature_tensors_with_step, hym_residual, CMatrix, MetricModel,
    C64, DEFAULT_FD_STEP,
};
use mylab::intersect::{kahler_class, projective_space};
use mylab::radial::KahlerProfile;
use mylab::tau::{rational_to_f64, TauPoly};
use mylab::toric::fans;
use mylab::{ClassVector, IntersectionData, TauClass};
use num_rational::BigRational;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::io::{dec, grid, read_columns, resample, Io};
use crate::manifest::{tolerances, Tolerances};
use crate::OutArg;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Op {
    Frame,
    ChenOgiue,
    Hym,
    Extension,
}

#[derive(Args, Debug)]
pub struct CurvlabArgs {
    /// Model JSON document.
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, value_enum)]
    pub op: Op,
    /// Chart point as `re,im;re,im;…`, one pair per coordinate.
    #[arg(long)]
    pub point: Option<String>,
    /// Second fundamental form coefficient of the extension; defaults to 1/√(n+1).
    #[arg(long)]
    pub a: Option<f64>,
    /// Finite-difference step for radial curvature.
    #[arg(long, default_value_t = DEFAULT_FD_STEP)]
    pub h: f64,
    /// Quadrature intervals for radial models.
    #[arg(long, default_value_t = 2048)]
    pub nodes: usize,
    #[arg(long = "T", default_value_t = 12.0)]
    pub t_max: f64,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Deserialize)]
#[serde(tag = "model", rename_all = "lowercase", deny_unknown_fields)]
enum ModelDoc {
    Fs { n: usize, scale: String },
    Radial { n: usize, profile: PathBuf, #[serde(default = "zero")] eps: String },
    Product { factors: Vec<String> },
}

fn zero() -> String {
    "0".into()
}

struct Loaded {
    model: MetricModel,
    data: IntersectionData,
    class: TauClass,
}

fn rational(path: &Path, field: &str, s: &str) -> Result<BigRational, CliError> {
    mylab::tau::parse_rational(s).map_err(|_| CliError::parse(path, format!("`{field}` must be a rational p/q, got `{s}`")))
}

fn load(args: &CurvlabArgs, io: &mut Io) -> Result<Loaded, CliError> {
    let (path, text) = io.read(&args.model, "models")?;
    let doc: ModelDoc = serde_json::from_str(&text).map_err(|e| CliError::parse(&path, e))?;
    let tau = |s: &BigRational| TauPoly::monomial(s.clone(), 1);
    Ok(match doc {
        ModelDoc::Fs { n, scale } => {
            let s = rational(&path, "scale", &scale)?;
            Loaded {
                model: MetricModel::fubini_study(n, s.clone()),
                data: projective_space(n),
                class: ClassVector::from_pairs([("H", tau(&s))]),
            }
        }
        ModelDoc::Radial { n, profile, eps } => {
            let e = rational(&path, "eps", &eps)?;
            let g = grid(args.nodes, args.t_max)?;
            // a profile not found the usual way is looked up next to the model document
            let beside = path.parent().map(|d| d.join(&profile)).filter(|p| profile.is_relative() && p.exists());
            let (found, body) = io.read(beside.as_deref().unwrap_or(&profile), "profiles")?;
            let (t, v) = read_columns(&body, &found, "phi")?;
            let phi = resample(&t, &v, &g, &found)?;
            let p = KahlerProfile::new(n, rational_to_f64(&e), g, phi)?;
            let data = projective_space(n);
            let h = ClassVector::basis("H");
            let class = kahler_class(&data.anticanonical(), &h, &e);
            Loaded { model: MetricModel::Radial(Box::new(p)), data, class }
        }
        ModelDoc::Product { factors } => {
            let [a, b] = factors.as_slice() else {
                return Err(CliError::parse(&path, "a product model takes exactly two P¹ scales"));
            };
            let (a, b) = (rational(&path, "factors", a)?, rational(&path, "factors", b)?);
            Loaded {
                model: MetricModel::Product(vec![
                    MetricModel::fubini_study(1, a.clone()),
                    MetricModel::fubini_study(1, b.clone()),
                ]),
                data: fans::p1xp1().build_intersection_data(),
                class: ClassVector::from_pairs([("D1", tau(&a)), ("D2", tau(&b))]),
            }
        }
    })
}

fn parse_point(text: &str, dim: usize) -> Result<Vec<C64>, CliError> {
    let bad = |why: String| CliError::usage("--point", why);
    let z: Vec<C64> = text
        .split(';')
        .map(|pair| {
            let parts: Vec<&str> = pair.split(',').map(str::trim).collect();
            match parts.as_slice() {
                [re, im] => match (re.parse::<f64>(), im.parse::<f64>()) {
                    (Ok(re), Ok(im)) if re.is_finite() && im.is_finite() => Ok(C64::new(re, im)),
                    _ => Err(bad(format!("`{pair}` is not a pair of numbers"))),
                },
                _ => Err(bad(format!("`{pair}` must be `re,im`"))),
            }
        })
        .collect::<Result<_, _>>()?;
    if z.len() != dim {
        return Err(bad(format!("the model has {dim} coordinates, got {}", z.len())));
    }
    Ok(z)
}

fn matrix(m: &CMatrix) -> Value {
    let rows: Vec<Vec<[String; 2]>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [dec(m[(i, j)].re), dec(m[(i, j)].im)]).collect())
        .collect();
    json!(rows)
}

pub fn run(args: &CurvlabArgs, io: &mut Io) -> Result<Tolerances, CliError> {
    if !(args.h.is_finite() && args.h > 0.0) {
        return Err(CliError::usage("--h", "must be positive"));
    }
    let m = load(args, io)?;
    let n = m.model.dim();
    let a = match args.a {
        Some(a) if a.is_finite() => a,
        Some(_) => return Err(CliError::usage("--a", "must be finite")),
        None => 1.0 / ((n + 1) as f64).sqrt(),
    };
    let point = || {
        let text = args.point.as_deref().ok_or_else(|| CliError::usage("--point", "required by this --op"))?;
        parse_point(text, n)
    };
    let doc = match args.op {
        Op::Frame => serde_json::to_value(curvature_tensors_with_step(&m.model, &point()?, args.h)?.to_json())
            .expect("serializable frame"),
        Op::ChenOgiue => {
            let r = chen_ogiue_check(&m.model, &m.data, &m.class)?;
            json!({
                "lhs_exact": r.lhs_exact.to_string(),
                "lhs": dec(r.lhs),
                "rhs": dec(r.rhs),
                "difference": dec(r.difference),
                "lower_bound": dec(r.lower_bound),
            })
        }
        Op::Hym => {
            let r = hym_residual(&m.model, a, &m.data, &m.class)?;
            json!({
                "a": dec(a),
                "mu_exact": r.mu_exact.to_string(),
                "mu": dec(r.mu),
                "residual": dec(r.residual),
                "points": r.points,
            })
        }
        Op::Extension => {
            let e = canonical_extension_curvature(&m.model, a, &point()?)?;
            json!({
                "a": dec(e.a),
                "mean_curvature": matrix(&e.mean_curvature),
                "off_diagonal": dec(e.off_diagonal),
            })
        }
    };
    io.emit(args.out.out.as_deref(), &doc)?;
    Ok(tolerances([("h", dec(args.h))]))
}
