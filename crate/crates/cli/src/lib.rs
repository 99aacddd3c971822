//! `polariton` command-line front end.
//!
//! All lengths are in blockade radii and rates in EIT linewidths. Grids use
//! `start:stop:step`, comma lists or `logspace(a,b,n)`. The thread count of
//! parallel sweeps follows `RAYON_NUM_THREADS`.

mod commands;
pub mod config;
pub mod grid;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] polariton_core::Error),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Model(e) if e.is_numerical() => 3,
            CliError::Model(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "polariton",
    version,
    about = "Exchange collisions of Rydberg polaritons in multichannel optical networks",
    after_help = "Lengths are in blockade radii r_b, rates in EIT linewidths.\n\
                  Grids: VALUE, V1,V2,..., START:STOP:STEP (inclusive) or logspace(A,B,N).\n\
                  Set RAYON_NUM_THREADS to bound the worker threads.\n\
                  Exit codes: 0 success, 2 usage or input error, 3 numerical failure."
)]
pub struct Cli {
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Write results here; CSV output gets a <FILE>.meta.json sidecar.
    #[arg(long, short, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Leave the timestamp out of the metadata.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ModelArgs {
    /// Blockaded optical depth (a grid for `sweep` and `optimal-separation`).
    #[arg(long, value_name = "GRID")]
    pub db: Option<String>,
    /// Interaction sign, 1 or -1.
    #[arg(long, allow_negative_numbers = true)]
    pub sign: Option<i8>,
    /// Collective coupling G (physical parameter set).
    #[arg(long)]
    pub coupling: Option<f64>,
    /// Control Rabi frequency Omega.
    #[arg(long)]
    pub rabi: Option<f64>,
    /// Intermediate-state decay rate gamma.
    #[arg(long)]
    pub decay: Option<f64>,
    /// Dipolar coefficient C3 (signed).
    #[arg(long, allow_negative_numbers = true)]
    pub c3: Option<f64>,
    /// Speed of light in the units of the other physical parameters.
    #[arg(long)]
    pub speed_of_light: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SolverArgs {
    #[arg(long)]
    pub rtol: Option<f64>,
    #[arg(long)]
    pub atol: Option<f64>,
    /// Tail tolerance setting the integration half-length.
    #[arg(long)]
    pub tail_epsilon: Option<f64>,
    /// Chebyshev nodes of the radial amplitude table.
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Drop the loss coefficient (closed-form reference mode).
    #[arg(long)]
    pub loss_free: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GeometryArgs {
    /// Rail separation L.
    #[arg(long, value_name = "GRID")]
    pub sep: Option<String>,
    /// Field 1/e waist of both rails (0 for the zero-width limit).
    #[arg(long)]
    pub waist: Option<f64>,
    /// Photon rail waist, overriding --waist.
    #[arg(long)]
    pub waist_photon: Option<f64>,
    /// Spin-wave rail waist, overriding --waist.
    #[arg(long)]
    pub waist_spin: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scaled interaction, loss and exchange coefficients on a grid.
    Coeffs {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_name = "GRID", allow_hyphen_values = true)]
        z: Option<String>,
        #[arg(long, value_name = "GRID")]
        rperp: Option<String>,
        /// Momentum and frequency dependent coefficients (needs physical parameters).
        #[arg(long)]
        spectral: bool,
        /// Centre-of-mass momentum in 1/r_b.
        #[arg(long, value_name = "GRID", allow_hyphen_values = true)]
        k: Option<String>,
        /// Detuning in EIT linewidths.
        #[arg(long, value_name = "GRID", allow_hyphen_values = true)]
        omega: Option<String>,
    },
    /// Transmission and exchange amplitudes against transverse separation.
    Amplitudes {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, value_name = "GRID")]
        rperp: Option<String>,
    },
    /// Mode-averaged exchange efficiency.
    Efficiency {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        geometry: GeometryArgs,
    },
    /// Double-exchange figure of merit of the controlled-Z network.
    Gate {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        geometry: GeometryArgs,
    },
    /// Efficiency and figure of merit over optical depths and separations.
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        geometry: GeometryArgs,
    },
    /// Separation maximising the exchange efficiency, with power-law fits.
    OptimalSeparation {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        solver: SolverArgs,
        /// Rail waist (0 for the zero-width limit).
        #[arg(long)]
        width: Option<f64>,
        /// Initial search interval LO:HI.
        #[arg(long)]
        bracket: Option<String>,
    },
    /// Output photon and spin-wave densities on a transverse grid.
    DensityMap {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        geometry: GeometryArgs,
        /// Grid spacing (default: a fifth of the smaller waist).
        #[arg(long)]
        step: Option<f64>,
        /// Grid half-width about the midpoint (default: covers both rails).
        #[arg(long)]
        half_width: Option<f64>,
    },
    /// Branch ledger and truth table of a rail network (JSON output).
    Network {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        geometry: GeometryArgs,
        /// JSON network description; defaults to three rails A, B, C.
        #[arg(long, value_name = "FILE")]
        network: Option<PathBuf>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Coeffs { .. } => "coeffs",
            Command::Amplitudes { .. } => "amplitudes",
            Command::Efficiency { .. } => "efficiency",
            Command::Gate { .. } => "gate",
            Command::Sweep { .. } => "sweep",
            Command::OptimalSeparation { .. } => "optimal-separation",
            Command::DensityMap { .. } => "density-map",
            Command::Network { .. } => "network",
        }
    }
}

/// Runs the CLI with process stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return code;
        }
    };
    match commands::execute(&cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
