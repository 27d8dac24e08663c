//! `transship`: analytic bounds, tessellations and the grid solver from the
//! command line.
//!
//! Every subcommand accepts `--config FILE`, a JSON object whose keys are
//! the subcommand's long flag names; flags given on the command line win.
//! `TRANSSHIP_SEED` overrides the seed of seeded commands unless `--seed`
//! is given. Exit status: 0 success, 2 usage, 3 verification failure,
//! 4 I/O.

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::*;
use config::{merge, Options, SEED_ENV};
use error::CliError;

#[derive(Parser)]
#[command(name = "transship", version, about = "Optimal transshipment facility layouts")]
struct Cli {
    /// JSON file with default values for the subcommand's flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    #[command(allow_negative_numbers = true)]
    Bounds(BoundsOpts),
    #[command(allow_negative_numbers = true)]
    Sweep(SweepOpts),
    #[command(allow_negative_numbers = true)]
    Tessellate(TessellateOpts),
    #[command(allow_negative_numbers = true)]
    SolveGrid(SolveGridOpts),
    #[command(allow_negative_numbers = true)]
    MeasureAngles(MeasureAnglesOpts),
    #[command(allow_negative_numbers = true)]
    ExportMip(ExportMipOpts),
    #[command(allow_negative_numbers = true)]
    Inventory(InventoryOpts),
}

fn run_with<T: Options>(
    flags: T,
    cli_config: Option<&PathBuf>,
    run: fn(&T) -> Result<(), CliError>,
) -> Result<(), CliError> {
    let opts = merge(flags, cli_config.map(PathBuf::as_path), std::env::var(SEED_ENV).ok())?;
    run(&opts)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = cli.config.as_ref();
    let result = match cli.command {
        Command::Bounds(o) => run_with(o, cfg, bounds),
        Command::Sweep(o) => run_with(o, cfg, sweep),
        Command::Tessellate(o) => run_with(o, cfg, tessellate),
        Command::SolveGrid(o) => run_with(o, cfg, solve_grid),
        Command::MeasureAngles(o) => run_with(o, cfg, measure_angles),
        Command::ExportMip(o) => run_with(o, cfg, export_mip_cmd),
        Command::Inventory(o) => run_with(o, cfg, inventory),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("transship: {e}");
            e.exit_code()
        }
    }
}
