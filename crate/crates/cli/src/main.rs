//! `cycleprobe`: forecast the probability of below-trend real GDP from
//! the yield spread over quarterly macro panels.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cycleprobe_cli::config::{load_config, Overrides, ResolvedConfig};
use cycleprobe_cli::error::Result;
use cycleprobe_cli::run::{run_decompose, run_grid, run_study, run_summary, RunOutput};

#[derive(Parser)]
#[command(
    name = "cycleprobe",
    version,
    about = "Forecast below-trend real GDP from the yield spread"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose log real GDP into trend and cycle, with a penalty sweep
    Decompose(CommonArgs),
    /// Fit one candidate model per lag and mark the selected window
    Grid(CommonArgs),
    /// Run the whole study and emit every table and figure-data file
    Study(CommonArgs),
    /// Emit summary statistics of the model variables
    Summary(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the TOML study configuration
    #[arg(long, value_name = "PATH")]
    config: PathBuf,

    /// Smoothing penalty, overriding the configuration
    #[arg(long, value_name = "X")]
    lambda: Option<f64>,

    /// Largest candidate lag in quarters, overriding the configuration
    #[arg(long, value_name = "N")]
    max_lag: Option<usize>,

    /// Strict significance threshold, overriding the configuration
    #[arg(long, value_name = "P")]
    threshold: Option<f64>,

    /// Selection criterion: rmse, mae, mape, or mcfadden
    #[arg(long, value_name = "CRITERION")]
    criterion: Option<String>,

    /// Output directory, overriding the configuration
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

impl CommonArgs {
    fn resolve(&self) -> Result<ResolvedConfig> {
        let overrides = Overrides {
            lambda: self.lambda,
            max_lag: self.max_lag,
            threshold: self.threshold,
            criterion: self.criterion.clone(),
            out: self.out.clone(),
        };
        load_config(&self.config, &overrides)
    }
}

fn dispatch(cli: Cli) -> Result<RunOutput> {
    match cli.command {
        Command::Decompose(args) => run_decompose(&args.resolve()?),
        Command::Grid(args) => run_grid(&args.resolve()?),
        Command::Study(args) => run_study(&args.resolve()?),
        Command::Summary(args) => run_summary(&args.resolve()?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(output) => {
            print!("{}", output.stdout);
            for warning in &output.warnings {
                eprintln!("{warning}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error[{}]: {e}", e.class());
            ExitCode::FAILURE
        }
    }
}
