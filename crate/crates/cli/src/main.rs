use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use riscope::commands::{cmd_height_sweep, cmd_simulate, HeightSweepArgs, SimulateArgs};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "riscope",
    version,
    about = "Deterministic urban radio-coverage simulator",
    long_about = "Computes per-point minimum path loss over direct macro-cell \
                  and reflected panel paths, and sweeps panel mounting heights. \
                  Outputs are bit-reproducible for any worker count."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one coverage sweep and write pl_map.csv, cdf.csv, summary.json.
    Simulate(SimulateArgs),
    /// Sweep panel mounting heights and write sweep.csv plus per-case maps.
    HeightSweep(HeightSweepArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successful exits; anything else is usage.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::HeightSweep(args) => cmd_height_sweep(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
