//! `leopnt` command line.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 data or
//! coverage error.

mod codes;
mod csk;
mod io;
mod plan;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use leopnt::config::RunConfig;
use leopnt::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "leopnt", version, about = "LEO PNT constellation analysis and acquisition planning")]
pub struct Cli {
    /// Run configuration file (key = value).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides `output_dir` from the configuration.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Seed for the noise simulations.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Propagate and write per-latitude observable logs.
    Simulate(run::SimulateArgs),
    /// Compute sweep statistics, live or from observable logs.
    Metrics(run::MetricsArgs),
    /// Render report tables from stored statistics.
    Report(run::ReportArgs),
    /// Acquisition planning.
    #[command(subcommand)]
    Plan(plan::PlanCommand),
    /// Spreading-code generation and analysis.
    #[command(subcommand)]
    Codes(codes::CodesCommand),
    /// Code shift keying modem.
    #[command(subcommand)]
    Csk(csk::CskCommand),
}

/// Run parameters that override the configuration file.
#[derive(Args, Debug, Clone, Default)]
pub struct RunOverrides {
    /// Built-in constellation: pulsar-foc, pulsar-iov or gps-24.
    #[arg(long)]
    constellation: Option<String>,
    /// Constellation definition file (key = value).
    #[arg(long)]
    constellation_file: Option<PathBuf>,
    /// Observer latitudes in degrees, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    latitudes: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    longitude: Option<f64>,
    #[arg(long)]
    height_m: Option<f64>,
    #[arg(long)]
    duration_days: Option<f64>,
    /// Time step in seconds.
    #[arg(long)]
    step: Option<f64>,
    /// Elevation masks in degrees, ascending, comma separated.
    #[arg(long, value_delimiter = ',')]
    masks: Option<Vec<f64>>,
    /// Altitude reference: mean or equatorial.
    #[arg(long)]
    reference: Option<String>,
    /// Sampling period of the pairwise statistics, seconds.
    #[arg(long)]
    pair_step: Option<f64>,
}

pub struct Context {
    pub config: RunConfig,
    /// Set when `--out` was given explicitly.
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub seed: u64,
}

impl Context {
    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| self.config.output_dir.clone())
    }

    /// Configuration with command-line overrides applied and validated.
    pub fn run_config(&self, o: &RunOverrides) -> Result<RunConfig> {
        let mut c = self.config.clone();
        if let Some(v) = &o.constellation {
            c.constellation = v.clone();
            c.constellation_file = None;
        }
        if let Some(v) = &o.constellation_file {
            c.constellation_file = Some(v.clone());
        }
        if let Some(v) = &o.latitudes {
            c.latitudes = v.clone();
        }
        if let Some(v) = o.longitude {
            c.longitude = v;
        }
        if let Some(v) = o.height_m {
            c.height_m = v;
        }
        if let Some(v) = o.duration_days {
            c.duration_days = v;
        }
        if let Some(v) = o.step {
            c.step_s = v;
        }
        if let Some(v) = &o.masks {
            c.masks = v.clone();
        }
        if let Some(v) = &o.reference {
            c.altitude_reference = v.parse()?;
        }
        if let Some(v) = o.pair_step {
            c.pair_step_s = v;
        }
        c.validate()?;
        Ok(c)
    }
}

fn load_config(path: Option<&PathBuf>) -> Result<RunConfig> {
    match path {
        None => Ok(RunConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::config(format!("cannot read {}: {e}", p.display())))?;
            RunConfig::from_text(&text)
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    let ctx = Context { config: load_config(cli.config.as_ref())?, out: cli.out, workers: cli.workers, seed: cli.seed };
    if ctx.workers == Some(0) {
        return Err(Error::usage("--workers must be at least 1"));
    }
    match cli.command {
        Command::Simulate(a) => run::simulate(&ctx, &a),
        Command::Metrics(a) => run::metrics(&ctx, &a),
        Command::Report(a) => run::report(&ctx, &a),
        Command::Plan(c) => plan::run(&ctx, c),
        Command::Codes(c) => codes::run(&ctx, c),
        Command::Csk(c) => csk::run(&ctx, c),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("leopnt: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
