use std::path::PathBuf;

use clap::Args;
use mylab::toric::{anticanonical_polytope, perturbed_anticanonical_polytope, DeltaReportJson};
use rayon::prelude::*;

use super::load_fan;
use crate::class_expr::parse_rational_flag;
use crate::error::CliError;
use crate::io::Io;
use crate::manifest::Tolerances;
use crate::OutArg;

#[derive(Args, Debug)]
pub struct DeltaArgs {
    #[arg(long)]
    pub fan: PathBuf,
    /// Comma-separated levels k ≥ 1. Levels are independent, so `--jobs`
    /// spreads them over threads without changing the output.
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
    pub k: Vec<u32>,
    /// Use the polytope of -K + εA (A the fan's ample divisor) instead of -K.
    #[arg(long)]
    pub eps: Option<String>,
    /// Also write `k,N_k,delta_k,alpha_k` rows to this CSV file.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArg,
}

pub fn run(args: &DeltaArgs, io: &mut Io) -> Result<Tolerances, CliError> {
    let fan = load_fan(io, &args.fan)?;
    if args.k.is_empty() || args.k.contains(&0) {
        return Err(CliError::usage("--k", "levels must be positive integers"));
    }
    let poly = match &args.eps {
        Some(e) => perturbed_anticanonical_polytope(&fan, &parse_rational_flag("--eps", e)?)?,
        None => anticanonical_polytope(&fan)?,
    };
    let reports: Vec<DeltaReportJson> = args
        .k
        .par_iter()
        .map(|&k| poly.delta_estimate(k).map(|d| d.to_json()))
        .collect::<Result<_, _>>()?;
    if let Some(path) = &args.csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["k", "N_k", "delta_k", "alpha_k"]).expect("in-memory write");
        for r in &reports {
            w.write_record([r.k.to_string(), r.n_k.to_string(), r.delta_k.clone(), r.alpha_k.clone()])
                .expect("in-memory write");
        }
        let text = String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8");
        io.write(path, &text)?;
    }
    let out = args.out.out.as_deref();
    match reports.as_slice() {
        [one] => io.emit(out, one)?,
        many => io.emit(out, &many)?,
    }
    Ok(Tolerances::new())
}
