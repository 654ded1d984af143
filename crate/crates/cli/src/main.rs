//! `riskytime`: term structures with risky times from the command line.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 bad usage or input.

mod affine_cmd;
mod curve_cmd;
mod filter_cmd;
mod output;
mod simulate_cmd;
mod verify_cmd;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(
    name = "riskytime",
    version,
    about = "Defaultable term structures with risky times"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, clap::Args)]
pub struct RunConfig {
    /// JSON scenario file.
    #[arg(long)]
    pub config: PathBuf,
    /// Seed for stochastic commands.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Number of Monte Carlo paths.
    #[arg(long)]
    pub paths: Option<usize>,
    /// Time step for ODE, filter and simulation grids.
    #[arg(long)]
    pub step: Option<f64>,
    /// Residual tolerance for verification.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Bond prices P(0,T) over the maturity grid of a forward surface.
    Curve(RunConfig),
    /// Riccati solution and affine bond prices.
    Affine {
        #[command(flatten)]
        run: RunConfig,
        /// Also write the Riccati solution of the longest maturity as CSV.
        #[arg(long)]
        solution: Option<PathBuf>,
    },
    /// Synthetic filter run with a news event.
    Filter(RunConfig),
    /// Default-time, announced-schedule or Azéma ensembles.
    Simulate(RunConfig),
    /// No-arbitrage drift checks; exit code 1 when any check fails.
    Verify(RunConfig),
}

/// Error carrying the exit code it should produce.
#[derive(Debug)]
pub enum Failure {
    Usage(anyhow::Error),
    Verification,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.into())
    }
}

impl RunConfig {
    pub fn require_seed(&self) -> Result<u64, Failure> {
        self.seed
            .ok_or_else(|| Failure::Usage(anyhow::anyhow!("this command needs --seed")))
    }

    pub fn read_config(&self) -> anyhow::Result<String> {
        use anyhow::Context;
        let text = std::fs::read_to_string(&self.config)
            .with_context(|| format!("reading {}", self.config.display()))?;
        if text.trim().is_empty() {
            anyhow::bail!("{} is empty", self.config.display());
        }
        Ok(text)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Curve(run) => curve_cmd::run(&run),
        Command::Affine { run, solution } => affine_cmd::run(&run, solution.as_deref()),
        Command::Filter(run) => filter_cmd::run(&run),
        Command::Simulate(run) => simulate_cmd::run(&run),
        Command::Verify(run) => verify_cmd::run(&run),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
