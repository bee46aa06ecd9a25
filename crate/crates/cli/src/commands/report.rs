use std::path::PathBuf;

use clap::Args;
use mylab::tau::{format_rational, rat};
use mylab::toric::{anticanonical_polytope, check_bj_bounds};
use serde_json::{json, Value};

use super::{first_ample, load_fan, load_variety};
use crate::error::CliError;
use crate::io::{dec, Io};
use crate::manifest::Tolerances;
use crate::OutArg;

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Variety JSON document.
    #[arg(long)]
    pub variety: Option<PathBuf>,
    /// Fan JSON document; adds polytope invariants to the bundle.
    #[arg(long)]
    pub fan: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub out: OutArg,
}

/// Values of ε at which the key-lemma ratio is tabulated.
const KEY_LEMMA_EPS: [(i64, i64); 3] = [(1, 1), (1, 10), (1, 100)];

/// Levels of the δ estimate listed for fans.
const DELTA_LEVELS: [u32; 3] = [1, 2, 4];

fn key_lemma(d: &mylab::IntersectionData) -> Value {
    let Some(a) = first_ample(d) else { return Value::Null };
    let l = d.anticanonical();
    let rows: Vec<Value> = KEY_LEMMA_EPS
        .iter()
        .filter_map(|&(p, q)| {
            let eps = rat(p, q);
            d.key_lemma_ratio(&l, &a, &eps).ok().map(|r| {
                json!({"eps": format_rational(&eps), "ratio": r.to_string(), "decimal": dec(r.to_f64())})
            })
        })
        .collect();
    json!(rows)
}

pub fn run(args: &ReportArgs, io: &mut Io) -> Result<Tolerances, CliError> {
    let (data, fan) = match (&args.source.variety, &args.source.fan) {
        (Some(v), _) => (load_variety(io, v)?, None),
        (None, Some(f)) => {
            let fan = load_fan(io, f)?;
            (fan.build_intersection_data(), Some(fan))
        }
        (None, None) => return Err(CliError::usage("--variety", "give --variety or --fan")),
    };
    let mut bundle = super::intersect::summary(&data);
    bundle["c2_pairing"] = json!(data.c2_pairing(&vec![&data.anticanonical(); data.n().saturating_sub(2)]).ok().map(|v| format_rational(&v)));
    bundle["key_lemma"] = key_lemma(&data);
    if let Some(fan) = fan {
        let mut toric = super::toric::summary(&fan)?;
        let poly = anticanonical_polytope(&fan)?;
        let levels: Vec<Value> = DELTA_LEVELS
            .iter()
            .map(|&k| poly.delta_estimate(k).map(|e| serde_json::to_value(e.to_json()).expect("serializable")))
            .collect::<Result<_, _>>()?;
        let (alpha, delta) = (poly.alpha_limit(), poly.delta_limit());
        toric["delta_levels"] = json!(levels);
        toric["alpha"] = json!(format_rational(&alpha));
        toric["delta"] = json!(format_rational(&delta));
        toric["bj_bounds_hold"] = json!(check_bj_bounds(&alpha, &delta, 2, fan.ample_divisor().iter().all(|&c| c == 1)));
        bundle["toric"] = toric;
    }
    io.emit(args.out.out.as_deref(), &bundle)?;
    Ok(Tolerances::new())
}
