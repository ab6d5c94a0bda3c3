//! `diffnorm`: reproducible norm, equivalence-sweep, condition and half-space
//! multiplier experiments with CSV/JSON reports.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{ConditionsArgs, MultiplierArgs, NormArgs, SweepArgs};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Core(diffnorm::Error),
    Io(String),
}

impl From<diffnorm::Error> for CliError {
    fn from(e: diffnorm::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numerical_budget() => 3,
            _ => 2,
        }
    }

    fn record(&self) -> serde_json::Value {
        let (kind, message) = match self {
            CliError::Config(m) => ("config", m.clone()),
            CliError::Core(e) => (e.kind(), e.to_string()),
            CliError::Io(m) => ("io", m.clone()),
        };
        serde_json::json!({ "error": kind, "message": message })
    }
}

#[derive(Parser)]
#[command(name = "diffnorm", version, about = "Weighted difference and Bessel potential norm experiments")]
struct Cli {
    /// TOML file supplying defaults for the command's flags
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one norm of one function
    Norm(NormArgs),
    /// Ratios of difference norms to Bessel potential norms over a corpus
    EquivSweep(SweepArgs),
    /// Multiplier condition quantities of a symbol
    Conditions(ConditionsArgs),
    /// Half-space multiplier threshold sweep and boundary profile
    Multiplier(MultiplierArgs),
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = cli.config.as_deref();
    match cli.command {
        Command::Norm(a) => commands::norm(config::resolve(&a, file, "norm")?),
        Command::EquivSweep(a) => commands::equiv_sweep(config::resolve(&a, file, "equiv-sweep")?),
        Command::Conditions(a) => commands::conditions(config::resolve(&a, file, "conditions")?),
        Command::Multiplier(a) => commands::multiplier(config::resolve(&a, file, "multiplier")?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(e.exit_code())
        }
    }
}
