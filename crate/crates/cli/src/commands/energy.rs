use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, ValueEnum};
use mylab::functionals::{differential_check, energy_report, Functional, Twist, VOLUME_TOLERANCE};
use mylab::radial::{Grid, KahlerProfile};
use serde_json::json;

use crate::error::CliError;
use crate::io::{dec, grid, read_columns, resample, Io};
use crate::manifest::{tolerances, Tolerances};
use crate::OutArg;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    #[value(name = "E")]
    E,
    #[value(name = "E_gamma")]
    EGamma,
    #[value(name = "M")]
    M,
}

impl From<Which> for Functional {
    fn from(w: Which) -> Self {
        match w {
            Which::E => Functional::E,
            Which::EGamma => Functional::EGamma,
            Which::M => Functional::M,
        }
    }
}

#[derive(Args, Debug)]
pub struct EnergyArgs {
    /// Potential φ as CSV with header `t,phi`.
    #[arg(long)]
    pub profile: PathBuf,
    /// Complex dimension of the projective space.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Class parameter ε ≥ 0.
    #[arg(long, default_value_t = 0.0)]
    pub eps: f64,
    /// Reference potential ω₀ (`t,phi`); the round metric when omitted.
    #[arg(long)]
    pub omega0: Option<PathBuf>,
    /// Cohomology coefficient of the twist γ.
    #[arg(long, default_value_t = 1.0)]
    pub gamma_c: f64,
    /// Potential of γ (`t,psi`); zero when omitted.
    #[arg(long)]
    pub gamma: Option<PathBuf>,
    /// Cohomology coefficient of the twist θ.
    #[arg(long, default_value_t = 0.0)]
    pub theta_c: f64,
    /// Potential of θ (`t,psi`); zero when omitted.
    #[arg(long)]
    pub theta: Option<PathBuf>,
    /// Report the differential of this functional instead of the energies.
    #[arg(long, value_enum)]
    pub differential: Option<Which>,
    /// Direction u for `--differential` (`t,u`).
    #[arg(long)]
    pub direction: Option<PathBuf>,
    /// Central-difference steps for `--differential`.
    #[arg(long, value_delimiter = ',', default_value = "0.02,0.01,0.005")]
    pub steps: Vec<f64>,
    /// Quadrature intervals.
    #[arg(long, default_value_t = 2048)]
    pub nodes: usize,
    /// Half-width of the radial coordinate range.
    #[arg(long = "T", default_value_t = 12.0)]
    pub t_max: f64,
    #[command(flatten)]
    pub out: OutArg,
}

fn column(io: &mut Io, path: &Path, name: &str, g: &Grid) -> Result<Vec<f64>, CliError> {
    let (found, text) = io.read(path, "profiles")?;
    let (t, v) = read_columns(&text, &found, name)?;
    resample(&t, &v, g, &found)
}

fn profile(io: &mut Io, args: &EnergyArgs, path: &Path, g: &Arc<Grid>) -> Result<KahlerProfile, CliError> {
    let phi = column(io, path, "phi", g)?;
    Ok(KahlerProfile::new(args.n, args.eps, g.clone(), phi)?)
}

fn twist(io: &mut Io, c: f64, path: &Option<PathBuf>, g: &Grid) -> Result<Twist, CliError> {
    let psi = match path {
        Some(p) => column(io, p, "psi", g)?,
        None => vec![0.0; g.len()],
    };
    Ok(Twist::Potential { c, psi })
}

pub fn run(args: &EnergyArgs, io: &mut Io) -> Result<Tolerances, CliError> {
    if args.n == 0 {
        return Err(CliError::usage("--n", "dimension must be at least 1"));
    }
    if !(args.eps.is_finite() && args.eps >= 0.0) {
        return Err(CliError::usage("--eps", "must be a finite number ≥ 0"));
    }
    let g = grid(args.nodes, args.t_max)?;
    let p = profile(io, args, &args.profile, &g)?;
    let omega0 = match &args.omega0 {
        Some(path) => profile(io, args, path, &g)?,
        None => KahlerProfile::round(args.n, args.eps, g.clone()),
    };
    let gamma = twist(io, args.gamma_c, &args.gamma, &g)?;
    let out = args.out.out.as_deref();
    match args.differential {
        None => {
            let theta = twist(io, args.theta_c, &args.theta, &g)?;
            io.emit(out, &energy_report(&p, &gamma, &theta, &omega0)?.to_json())?;
        }
        Some(which) => {
            let path = args
                .direction
                .as_ref()
                .ok_or_else(|| CliError::usage("--direction", "required by --differential"))?;
            if args.steps.is_empty() || args.steps.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
                return Err(CliError::usage("--steps", "steps must be positive"));
            }
            let u = column(io, path, "u", &g)?;
            let check = differential_check(&p, &omega0, &gamma, &u, which.into(), &args.steps)?;
            let name = which.to_possible_value().expect("named").get_name().to_string();
            let doc = json!({
                "functional": name,
                "analytic": dec(check.analytic),
                "finite_differences": check
                    .finite_differences
                    .iter()
                    .map(|(s, v)| json!({"step": dec(*s), "value": dec(*v)}))
                    .collect::<Vec<_>>(),
                "errors": check.errors().into_iter().map(dec).collect::<Vec<_>>(),
                "ratios": check.ratios().into_iter().map(dec).collect::<Vec<_>>(),
            });
            io.emit(out, &doc)?;
        }
    }
    Ok(tolerances([
        ("nodes", args.nodes.to_string()),
        ("T", dec(args.t_max)),
        ("volume_defect", dec(VOLUME_TOLERANCE)),
    ]))
}
