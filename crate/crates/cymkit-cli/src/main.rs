//! `cymkit` command-line driver.

mod commands;
mod io;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "cymkit", version, about = "Coupled Kähler–Yang–Mills toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug, Default)]
pub struct Common {
    /// JSON input file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Recorded in every output.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Coupling; exact rationals such as `1/3` are accepted by `stability`.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// ASD residual, charge and density shape of a 't Hooft instanton.
    InstantonCheck(Common),
    /// Continuation of the coupled system on ℂ² from the basic instanton.
    Continuation(Common),
    /// Exact α-invariants of split bundles on P¹.
    Stability(Common),
    /// Numeric Futaki-type character against the exact invariant.
    Futaki(Common),
    /// Decay rates of the radial connection Laplacian.
    LaplacianProbe(Common),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::InstantonCheck(c) => commands::instanton_check(c),
        Command::Continuation(c) => commands::continuation(c),
        Command::Stability(c) => commands::stability(c),
        Command::Futaki(c) => commands::futaki(c),
        Command::LaplacianProbe(c) => commands::laplacian_probe(c),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cymkit: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
