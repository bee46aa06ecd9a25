use std::path::PathBuf;

use clap::Args;
use mylab::tau::format_rational;
use mylab::toric::{anticanonical_polytope, ToricSurfaceFan};
use serde_json::{json, Value};

use super::load_fan;
use crate::error::CliError;
use crate::io::Io;
use crate::manifest::Tolerances;
use crate::OutArg;

#[derive(Args, Debug)]
pub struct ToricArgs {
    /// Fan JSON document `{"rays": [[x, y], …]}`.
    #[arg(long)]
    pub fan: PathBuf,
    /// Print the intersection data of the surface instead of the summary.
    #[arg(long)]
    pub emit_intersection: bool,
    #[command(flatten)]
    pub out: OutArg,
}

pub fn summary(fan: &ToricSurfaceFan) -> Result<Value, CliError> {
    let d = fan.build_intersection_data();
    let c1 = d.anticanonical();
    let c1sq = d.self_intersection(&c1)?;
    let poly = anticanonical_polytope(fan)?;
    let vertices: Vec<[String; 2]> =
        poly.vertices().iter().map(|[x, y]| [format_rational(x), format_rational(y)]).collect();
    Ok(json!({
        "rays": fan.rays(),
        "labels": (0..fan.len()).map(ToricSurfaceFan::label).collect::<Vec<_>>(),
        "self_intersections": (0..fan.len()).map(|i| fan.self_intersection(i).to_string()).collect::<Vec<_>>(),
        "c1_squared": format_rational(&c1sq),
        "c2": fan.len().to_string(),
        "ample_divisor": fan.ample_divisor().iter().map(i64::to_string).collect::<Vec<_>>(),
        "anticanonical_polytope": {
            "vertices": vertices,
            "area": format_rational(&poly.area()),
        },
    }))
}

pub fn run(args: &ToricArgs, io: &mut Io) -> Result<Tolerances, CliError> {
    let fan = load_fan(io, &args.fan)?;
    let out = args.out.out.as_deref();
    if args.emit_intersection {
        io.emit(out, &fan.build_intersection_data().to_json())?;
    } else {
        io.emit(out, &summary(&fan)?)?;
    }
    Ok(Tolerances::new())
}
