use std::path::PathBuf;
use std::process::ExitCode;

use billiards_cli::{parse_config, run, Command, ConfigError, RunError};
use clap::Parser;

/// Billiards in ovals on the plane, the sphere and the hyperbolic plane.
#[derive(Parser)]
#[command(name = "billiards", version)]
struct Cli {
    /// Experiment to run.
    #[arg(value_enum)]
    command: Command,
    /// JSON experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// Directory receiving the CSV tables and the JSON summary.
    #[arg(long)]
    out: PathBuf,
}

fn execute(cli: &Cli) -> Result<billiards_cli::RunReport, RunError> {
    let bytes = std::fs::read(&cli.config).map_err(|source| ConfigError::Read {
        path: cli.config.display().to_string(),
        source,
    })?;
    let config = parse_config(&bytes)?;
    match cli.command {
        Command::Orbit => {
            config.require_psi0()?;
        }
        Command::Melnikov | Command::Verify => {
            config.require_resonance()?;
        }
        Command::PhasePortrait => {}
    }
    run(&config, cli.command, &cli.out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(report) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
