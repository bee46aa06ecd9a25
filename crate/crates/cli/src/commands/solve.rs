use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use clap::Args;
use mylab::radial::{KahlerProfile, RadialForm};
use mylab::solver::{approximate_ke_diagnostic, continuation, solve_twisted_ke, SolveConfig, SolveResult, DEFAULT_EPS_GRID};
use rayon::prelude::*;
use serde_json::json;

use crate::error::CliError;
use crate::io::{dec, grid, read_columns, resample, write_profile_csv, Io};
use crate::manifest::{tolerances, Tolerances};

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Complex dimension of the projective space.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Decreasing continuation values of ε.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_EPS_GRID)]
    pub eps_grid: Vec<f64>,
    /// Potential ψ of θ = -ω_FS/2π + dd^c ψ (`t,psi`); ψ = 0 when omitted.
    #[arg(long)]
    pub theta: Option<PathBuf>,
    /// Newton tolerance on the sup norm of the residual.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 50)]
    pub max_iter: usize,
    /// Solve every ε from the round metric instead of seeding from the
    /// previous solution. Required for `--jobs` above 1.
    #[arg(long)]
    pub no_seed: bool,
    #[arg(long, default_value_t = 2048)]
    pub nodes: usize,
    #[arg(long = "T", default_value_t = 12.0)]
    pub t_max: f64,
    /// Where run.json goes; one profile CSV per ε is written beside it.
    #[arg(long)]
    pub out: PathBuf,
}

fn csv_path(out: &Path, eps: f64) -> PathBuf {
    let stem = out.file_stem().map_or("run".into(), |s| s.to_string_lossy().into_owned());
    out.with_file_name(format!("{stem}_eps_{eps}.csv"))
}

pub fn run(args: &SolveArgs, jobs: usize, io: &mut Io) -> Result<Tolerances, CliError> {
    if args.n == 0 {
        return Err(CliError::usage("--n", "dimension must be at least 1"));
    }
    if args.eps_grid.is_empty() || args.eps_grid.iter().any(|e| !(e.is_finite() && *e >= 0.0)) {
        return Err(CliError::usage("--eps-grid", "values must be finite and ≥ 0"));
    }
    if !(args.tol.is_finite() && args.tol > 0.0) {
        return Err(CliError::usage("--tol", "must be positive"));
    }
    if jobs > 1 && !args.no_seed {
        return Err(CliError::usage("--jobs", "seeded continuation is sequential; add --no-seed to run ε values in parallel"));
    }
    let g = grid(args.nodes, args.t_max)?;
    let psi = match &args.theta {
        Some(p) => {
            let (found, text) = io.read(p, "profiles")?;
            let (t, v) = read_columns(&text, &found, "psi")?;
            resample(&t, &v, &g, &found)?
        }
        None => vec![0.0; g.len()],
    };
    let theta = RadialForm::new(g.clone(), -1.0 / TAU, psi)?;
    let config = |eps: f64| {
        let mut c = SolveConfig::new(args.n, eps, theta.clone());
        c.newton_tol = args.tol;
        c.max_iter = args.max_iter;
        c
    };
    let omega0 = |eps: f64| Ok(KahlerProfile::round(args.n, eps, g.clone()));
    let runs: Vec<SolveResult> = if args.no_seed {
        args.eps_grid
            .par_iter()
            .map(|&eps| solve_twisted_ke(&config(eps), &omega0(eps)?))
            .collect::<Result<_, _>>()?
    } else {
        continuation(&args.eps_grid, config, omega0, true)?
    };
    let table = approximate_ke_diagnostic(&runs);
    let mut per_eps = Vec::with_capacity(runs.len());
    for (r, row) in runs.iter().zip(&table.rows) {
        let path = csv_path(&args.out, r.eps);
        io.write(&path, &write_profile_csv(&r.profile))?;
        per_eps.push(json!({
            "eps": dec(r.eps),
            "residual": dec(r.residual),
            "ma_residual": dec(r.ma_residual),
            "iterations": r.iterations,
            "converged": r.converged,
            "ricci_l1": dec(r.ricci_l1),
            "scalar_avg": dec(row.scalar_avg),
            "max_volume_defect": dec(r.max_volume_defect),
            "profile_csv": path.display().to_string(),
        }));
    }
    let doc = json!({
        "config": {
            "n": args.n,
            "eps_grid": args.eps_grid.iter().copied().map(dec).collect::<Vec<_>>(),
            "theta": args.theta.as_ref().map(|p| p.display().to_string()),
            "tol": dec(args.tol),
            "max_iter": args.max_iter,
            "seeded": !args.no_seed,
            "nodes": args.nodes,
            "T": dec(args.t_max),
        },
        "runs": per_eps,
        "diagnostic": {
            "rows": table.rows.iter().map(|r| json!({
                "eps": dec(r.eps),
                "ricci_l1": dec(r.ricci_l1),
                "scalar_avg": dec(r.scalar_avg),
            })).collect::<Vec<_>>(),
            "fitted_order": table.fitted_order.map(dec),
            "ricci_l1_decreasing": table.ricci_l1_decreasing,
            "scalar_bounded": table.scalar_bounded,
        },
    });
    io.emit(Some(&args.out), &doc)?;
    Ok(tolerances([
        ("newton_tol", dec(args.tol)),
        ("nodes", args.nodes.to_string()),
        ("T", dec(args.t_max)),
    ]))
}
