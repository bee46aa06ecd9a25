//! `mylab`: command-line front end over the `mylab` library.
//!
//! Exit status is 0 on success, 1 on a domain error (with a JSON error
//! document on stderr) and 2 on a usage error.

mod class_expr;
mod commands;
mod error;
mod io;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::error::CliError;
use crate::io::Io;

#[derive(Parser)]
#[command(name = "mylab", version, about = "Exact and numerical checks on explicit Kähler models")]
struct Cli {
    /// Write a run manifest (inputs, hashes, outputs, timing) to this path.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    /// Worker threads for subcommands that can use them; 1 keeps runs single-threaded.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Intersection numbers and derived invariants of a variety.
    Intersect(commands::intersect::IntersectArgs),
    /// Toric surface data from a fan.
    Toric(commands::toric::ToricArgs),
    /// Torus-invariant δ and α estimates of the anticanonical polytope.
    Delta(commands::delta::DeltaArgs),
    /// Energy functionals of a radial Kähler potential.
    Energy(commands::energy::EnergyArgs),
    /// Twisted Kähler-Einstein solves over a continuation grid.
    SolveTke(commands::solve::SolveArgs),
    /// Curvature diagnostics of a metric model.
    Curvlab(commands::curvlab::CurvlabArgs),
    /// Bundle of every invariant available for a variety or fan.
    Report(commands::report::ReportArgs),
}

/// Output destination shared by every subcommand.
#[derive(Args, Clone, Debug)]
pub struct OutArg {
    /// Write the result here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn run(cli: &Cli, io: &mut Io) -> Result<manifest::Tolerances, CliError> {
    if cli.jobs == 0 {
        return Err(CliError::usage("--jobs", "must be at least 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
        .map_err(|e| CliError::usage("--jobs", e))?;
    pool.install(|| match &cli.command {
        Command::Intersect(a) => commands::intersect::run(a, io),
        Command::Toric(a) => commands::toric::run(a, io),
        Command::Delta(a) => commands::delta::run(a, io),
        Command::Energy(a) => commands::energy::run(a, io),
        Command::SolveTke(a) => commands::solve::run(a, cli.jobs, io),
        Command::Curvlab(a) => commands::curvlab::run(a, io),
        Command::Report(a) => commands::report::run(a, io),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap already names the offending flag; help and version are not errors
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let start = Instant::now();
    let mut io = Io::default();
    let result = run(&cli, &mut io);
    let result = result.and_then(|tol| match &cli.manifest {
        Some(path) => {
            let m = manifest::RunManifest::new(std::env::args().collect(), &io, tol, start.elapsed());
            let mut text = serde_json::to_string_pretty(&m).expect("serializable manifest");
            text.push('\n');
            std::fs::write(path, text).map_err(|e| CliError::io(path, e))
        }
        None => Ok(()),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let doc = e.to_json();
            eprintln!("{}", serde_json::to_string(&doc).expect("serializable error"));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
