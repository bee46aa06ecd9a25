use std::path::PathBuf;

use clap::{Args, ValueEnum};
use mylab::tau::format_rational;
use mylab::{ClassVector, IntersectionData};
use serde_json::{json, Value};

use super::{first_ample, load_variety};
use crate::class_expr::{parse, parse_rational_flag};
use crate::error::CliError;
use crate::io::{dec, Io};
use crate::manifest::Tolerances;
use crate::OutArg;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Op {
    Summary,
    Number,
    Nu,
    Rhat,
    My,
    KeyLemma,
    Calabi,
    Slope,
}

#[derive(Args, Debug)]
pub struct IntersectArgs {
    /// Variety JSON document.
    #[arg(long)]
    pub variety: PathBuf,
    #[arg(long, value_enum, default_value_t = Op::Summary)]
    pub op: Op,
    /// Classes for `number`, separated by `;`, e.g. `A;A-K`.
    #[arg(long, allow_hyphen_values = true)]
    pub classes: Option<String>,
    /// The class L; defaults to -K.
    #[arg(long, allow_hyphen_values = true)]
    pub l: Option<String>,
    /// The ample class A; defaults to the first basis label flagged ample.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Positive rational ε for `key-lemma`.
    #[arg(long)]
    pub eps: Option<String>,
    /// Rank of the subobject for `slope`.
    #[arg(long)]
    pub rank: Option<usize>,
    /// First Chern class of the subobject for `slope`.
    #[arg(long, allow_hyphen_values = true)]
    pub c1: Option<String>,
    #[command(flatten)]
    pub out: OutArg,
}

fn class_or(flag: &str, given: &Option<String>, default: impl FnOnce() -> Option<ClassVector>) -> Result<ClassVector, CliError> {
    match given {
        Some(s) => parse(flag, s),
        None => default().ok_or_else(|| CliError::usage(flag, "required: the variety has no default for it")),
    }
}

fn required<'a, T>(flag: &str, v: &'a Option<T>, op: &str) -> Result<&'a T, CliError> {
    v.as_ref().ok_or_else(|| CliError::usage(flag, format!("required by --op {op}")))
}

/// Invariants of a variety document. Values are strings and counts are
/// integers; an invariant that is undefined for this data is `null`.
pub fn summary(d: &IntersectionData) -> Value {
    let c1 = d.anticanonical();
    let a = first_ample(d);
    let top = d.self_intersection(&c1).ok().map(|v| format_rational(&v));
    let my = d.my_quantity().ok().map(|v| format_rational(&v));
    let rhat = d.average_scalar_curvature(&c1).ok().map(|v| format_rational(&v));
    let nu = a.as_ref().and_then(|a| d.numerical_dimension(&c1, a).ok()).map(|v| v.to_string());
    let calabi = a.as_ref().and_then(|a| d.calabi_limit(&c1, a).ok()).map(|p| p.to_string());
    json!({
        "n": d.n(),
        "basis": d.basis().iter().map(|b| b.label.clone()).collect::<Vec<_>>(),
        "canonical": d.canonical_label(),
        "ample": d.ample_labels().collect::<Vec<_>>(),
        "c1_top": top,
        "my_quantity": my,
        "average_scalar_curvature": rhat,
        "numerical_dimension": nu,
        "calabi_limit": calabi,
    })
}

pub fn run(args: &IntersectArgs, io: &mut Io) -> Result<Tolerances, CliError> {
    let d = load_variety(io, &args.variety)?;
    let l = || class_or("--l", &args.l, || Some(d.anticanonical()));
    let a = || class_or("--a", &args.a, || first_ample(&d));
    let value = match args.op {
        Op::Summary => {
            let mut s = summary(&d);
            s["op"] = json!("summary");
            s
        }
        Op::Number => {
            let text = required("--classes", &args.classes, "number")?;
            let classes: Vec<ClassVector> = text.split(';').map(|c| parse("--classes", c)).collect::<Result<_, _>>()?;
            let refs: Vec<&ClassVector> = classes.iter().collect();
            exact("number", &d.intersection_number(&refs)?)
        }
        Op::Nu => json!({"op": "nu", "value": d.numerical_dimension(&l()?, &a()?)?.to_string()}),
        Op::Rhat => exact("rhat", &d.average_scalar_curvature(&l()?)?),
        Op::My => exact("my", &d.my_quantity()?),
        Op::KeyLemma => {
            let eps = parse_rational_flag("--eps", required("--eps", &args.eps, "key-lemma")?)?;
            let r = d.key_lemma_ratio(&l()?, &a()?, &eps)?;
            json!({"op": "key-lemma", "value": r.to_string(), "decimal": dec(r.to_f64())})
        }
        Op::Calabi => json!({"op": "calabi", "value": d.calabi_limit(&l()?, &a()?)?.to_string()}),
        Op::Slope => {
            let rank = *required("--rank", &args.rank, "slope")?;
            let c1 = parse("--c1", required("--c1", &args.c1, "slope")?)?;
            exact("slope", &d.slope(rank, &c1, &l()?)?)
        }
    };
    io.emit(args.out.out.as_deref(), &value)?;
    Ok(Tolerances::new())
}

fn exact(op: &str, v: &num_rational::BigRational) -> Value {
    json!({"op": op, "value": format_rational(v)})
}
