//! Experiment CLI for one-bit sigma-delta quantization on the circle.
//!
//! Exit codes: 0 on success, 1 on configuration errors, 2 when an
//! acceptance threshold is missed.

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

mod config;
mod csvfmt;
mod experiment;
mod svg;

use config::Overrides;

#[derive(Parser, Debug)]
#[command(
    name = "sdcircle",
    version,
    about = "One-bit sigma-delta quantization experiments on the unit circle"
)]
struct Cli {
    /// TOML configuration file; flags override its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Named preset: paper-fig1 or zero
    #[arg(long, global = true)]
    preset: Option<String>,

    /// Restrict to a single scheme of this order
    #[arg(long, global = true)]
    order: Option<usize>,

    /// Tap count for the second-order filter
    #[arg(long, global = true)]
    tabs: Option<usize>,

    /// Sample count N
    #[arg(long, global = true)]
    n: Option<usize>,

    /// Comma-separated oversampling factors for the sweep
    #[arg(long, global = true, value_delimiter = ',')]
    sweep: Option<Vec<f64>>,

    /// Apply the constant-shift update (default)
    #[arg(long, global = true, conflicts_with = "no_update")]
    update: bool,

    /// Skip the constant-shift update
    #[arg(long, global = true)]
    no_update: bool,

    /// Output directory for CSV/SVG/JSON reports
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for the randomized verification suites
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Evaluation grid size (defaults to 10*N)
    #[arg(long, global = true)]
    grid_resolution: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reconstruction-error panels before and after the update
    Figure1,
    /// Sup-error decay across a sample-count sweep, with slope thresholds
    Sweep,
    /// Dump the bit and state traces of one run as CSV
    Quantize,
    /// Run the identity suite and print pass/fail per check
    Verify,
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    let file = match &cli.config {
        Some(path) => config::load_file(path)?,
        None => config::FileConfig::default(),
    };
    let update = if cli.no_update {
        Some(false)
    } else if cli.update {
        Some(true)
    } else {
        None
    };
    let overrides = Overrides {
        preset: cli.preset,
        order: cli.order,
        tabs: cli.tabs,
        n: cli.n,
        sweep: cli.sweep,
        update,
        out: cli.out,
        seed: cli.seed,
        grid_resolution: cli.grid_resolution,
    };
    let resolved = config::resolve(file, overrides)?;
    match cli.command {
        Command::Figure1 => experiment::run_figure1(&resolved),
        Command::Sweep => experiment::run_decay_sweep(&resolved),
        Command::Quantize => experiment::run_quantize_dump(&resolved),
        Command::Verify => experiment::run_verify(&resolved),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
