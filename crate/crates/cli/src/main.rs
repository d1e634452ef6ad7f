//! `wiretap`: exponent sweeps, finite-blocklength bound tables, ensemble
//! simulations, and inequality verification for wiretap-channel analyses.

mod commands;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use spec::{CliError, CliResult, Units};

#[derive(Parser)]
#[command(name = "wiretap", version, about = "wiretap-channel bound and simulation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Input spec (JSON).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Unit for rates and entropic values.
    #[arg(long, value_enum, default_value = "bits")]
    units: Units,
    /// Seed for randomized paths.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Grid resolution for 1-D optimizations.
    #[arg(long, default_value_t = 512)]
    grid: usize,
    /// Tolerance override for verification margins.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Exponent curves e_psi / e_phi over a rate grid.
    Exponents(RunArgs),
    /// Default four-curve exponent sweep with ordering footer.
    Fig1(RunArgs),
    /// Finite-blocklength bound table over an n-grid.
    Bounds(RunArgs),
    /// Ensemble expectation experiments (resolvability, privacy amplification).
    Simulate(RunArgs),
    /// Random-instance inequality suites.
    Verify {
        #[command(flatten)]
        args: RunArgs,
        /// List the available inequality suites and exit.
        #[arg(long)]
        list: bool,
    },
}

fn require_config(args: &RunArgs) -> CliResult<PathBuf> {
    args.config.clone().ok_or_else(|| CliError::spec("this command requires --config"))
}

fn emit(args: &RunArgs, text: &str) -> CliResult<()> {
    match &args.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::spec(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run() -> CliResult<bool> {
    let cli = Cli::parse();
    let (args, output, pass) = match &cli.command {
        Command::Exponents(args) => {
            let config = spec::load_config(&require_config(args)?)?;
            let (out, pass) = commands::cmd_exponents(&config, args.units, args.grid)?;
            (args, out, pass)
        }
        Command::Fig1(args) => {
            let (out, pass) = commands::cmd_fig1(args.units, args.grid)?;
            (args, out, pass)
        }
        Command::Bounds(args) => {
            let config = spec::load_config(&require_config(args)?)?;
            let (out, pass) = commands::cmd_bounds(&config, args.units, args.grid)?;
            (args, out, pass)
        }
        Command::Simulate(args) => {
            let config = spec::load_config(&require_config(args)?)?;
            let (out, pass) = commands::cmd_simulate(&config, args.units, args.seed)?;
            (args, out, pass)
        }
        Command::Verify { args, list } => {
            if *list {
                (args, commands::list_verify_suites(), true)
            } else {
                let (out, pass) = commands::cmd_verify(args.seed, args.tol)?;
                (args, out, pass)
            }
        }
    };
    emit(args, &output)?;
    Ok(pass)
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
