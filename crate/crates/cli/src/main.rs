use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod output;
mod simulate;
mod table;
mod verify;

/// Charged particle in a uniform field: closed forms, gauge/frame
/// transformations and Crank–Nicolson runs.
#[derive(Debug, Parser)]
#[command(name = "qgauge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a verification suite; exit 0 iff every check passes.
    Verify {
        #[arg(long, value_enum, default_value_t = verify::Suite::All)]
        suite: verify::Suite,
        /// Also write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Perturb Γ(1/3) before running (negative control).
        #[arg(long, hide = true)]
        corrupt_airy_constant: bool,
    },
    /// Propagate a scenario described by a JSON config.
    Simulate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Print samples of Ai or a closed-form solution as CSV.
    Table(table::TableArgs),
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify { suite, json, corrupt_airy_constant } => verify::run(suite, json.as_deref(), verify::Faults { corrupt_airy_constant }),
        Command::Simulate { config } => simulate::run(&config),
        Command::Table(args) => table::run(&args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
