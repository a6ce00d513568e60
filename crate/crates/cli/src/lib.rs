//! Command-line front end for `povm-tradeoff`.
//!
//! Exit codes: 0 success, 1 validation or constraint failure, 2 I/O, parse
//! or usage error.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

mod commands;
pub mod format;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] povm_tradeoff::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Parse(_) | CliError::Usage(_) => 2,
            CliError::Invalid(_) | CliError::Core(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "povmtool", version, about = "Joint measurability and error tradeoffs for finite POVMs")]
pub struct Cli {
    #[command(flatten)]
    pub load: LoadOptions,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct LoadOptions {
    /// PSD tolerance on the smallest eigenvalue of each element.
    #[arg(long, global = true, default_value_t = povm_tradeoff::povm::PSD_TOL)]
    pub psd_tol: f64,
    /// Entrywise tolerance on the completeness relation.
    #[arg(long, global = true, default_value_t = povm_tradeoff::povm::COMPLETENESS_TOL)]
    pub completeness_tol: f64,
    /// Warn about invalid input POVMs instead of rejecting them.
    #[arg(long, global = true)]
    pub lenient: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    Inf,
    L1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Inequality {
    Theorem1,
    Theorem2,
    CorJoint,
    CorPvmInstrument,
    CorPvmInf,
    CorPvmL1,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a POVM file.
    Validate { povm: PathBuf },
    /// Observable distance between two POVMs on the same outcome set.
    Distance {
        #[arg(long, value_enum, default_value_t = Metric::Inf)]
        metric: Metric,
        a: PathBuf,
        b: PathBuf,
        /// Where to write the witness state.
        #[arg(long, default_value = "witness_state.json")]
        witness_out: PathBuf,
    },
    /// Evaluate a tradeoff inequality.
    Bounds {
        #[arg(long, value_enum)]
        inequality: Inequality,
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        joint: Option<PathBuf>,
        #[arg(long)]
        map_a: Option<PathBuf>,
        #[arg(long)]
        map_b: Option<PathBuf>,
    },
    /// Search for a joint observable with the given marginals.
    CheckJoint {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 20_000)]
        max_iter: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 500)]
        stagnation_window: usize,
        /// Skip the analytic commutator screen.
        #[arg(long)]
        no_screen: bool,
        #[arg(long, default_value = "joint_witness.json")]
        witness_out: PathBuf,
    },
    /// Sweep the achievable (X, Y) frontier.
    Frontier {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 20)]
        grid: usize,
        #[arg(long, default_value_t = povm_tradeoff::bounds::REGION_X_MAX)]
        x_max: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-4)]
        bisect_tol: f64,
        #[arg(long, default_value_t = 1e-7)]
        accept_tol: f64,
        #[arg(long, default_value_t = 3_000)]
        max_iter: usize,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Boundary curves of the qubit admissible region.
    QubitDemo {
        /// Angle between the two Bloch vectors, in [0, π/2].
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, default_value_t = 101)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized property suites.
    Selftest {
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match commands::dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
