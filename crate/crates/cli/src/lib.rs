//! Command-line front end: sweeps and tables, the verification suite, and
//! the reproduction report.
//!
//! Exit codes: `0` success, `1` configuration error, `2` solver failure. The
//! `verify` and `report` commands exit with the number of failed checks,
//! capped at 125.

pub mod commands;
pub mod grid;
pub mod output;
pub mod report;
pub mod verify;

use std::fmt;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use output::Format;
use stablecurv::rng::DEFAULT_SEED;

pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_SOLVER: i32 = 2;
pub const MAX_FAILURE_EXIT: usize = 125;

#[derive(Debug, Parser)]
#[command(name = "stablecurv", version, about = "Bakry-Emery curvature of fractional Laplacians on the circle")]
pub struct Cli {
    /// Table format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Write the table here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads for sweeps (defaults to all cores).
    #[arg(long, env = "STABLECURV_THREADS", global = true)]
    pub threads: Option<usize>,
    /// Seed for randomized checks.
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    pub seed: u64,
    /// Suppress progress messages on standard error.
    #[arg(long, short, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Field {
    /// `L_γ f`.
    Generator,
    /// `Γ(f,f)`.
    Gamma,
    /// `Γ₂(f,f)` from its definition.
    Gamma2,
    /// `Γ₂(f,f)` from the squared kernel.
    Gamma2Hadamard,
    /// `b·∇f`.
    Drift,
    /// `Γ₂` with the drift correction.
    DriftGamma2,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectrum of the pencil (R_H^{∘2}, R_H) with H = γ/2.
    Spectrum {
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        n: usize,
    },
    /// κ(γ,N) and the single-mode constant across a γ grid.
    Landscape {
        /// `start:stop:step`, a comma list, or one value.
        #[arg(long, default_value = "0.1:1.9:0.1")]
        grid: String,
        #[arg(long, default_value_t = 200)]
        n: usize,
    },
    /// Run the invariant suite and report pass/fail per check.
    Verify {
        /// Comma-separated check names; see `verify --list`.
        #[arg(long)]
        only: Option<String>,
        /// List check names and exit.
        #[arg(long)]
        list: bool,
        #[arg(long)]
        gamma: Option<f64>,
        #[arg(long)]
        h: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Curvature at γ = 1 under the drift −ω² sin x.
    Drift {
        #[arg(long)]
        omega_sq: f64,
        #[arg(long, default_value_t = 20)]
        n: usize,
        /// Point at which the spectrum is reported.
        #[arg(long, default_value_t = std::f64::consts::PI)]
        x: f64,
    },
    /// Sign pattern of R_H^{-1} R_H^{∘2} across H and N.
    Zmatrix {
        #[arg(long, default_value = "0.05:0.5:0.05")]
        h_grid: String,
        /// Scan every N from 2 to this value.
        #[arg(long, default_value_t = 200)]
        n_max: usize,
        /// Check this single N instead of scanning.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Evaluate a Γ-calculus field of a trigonometric polynomial.
    Oracle {
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 0.0)]
        omega_sq: f64,
        /// Coefficients as `(n, re, im)` triples, e.g. "(1,0.5,0),(-1,0.5,0)".
        #[arg(long)]
        f: String,
        #[arg(long, value_enum, default_value_t = Field::Gamma2)]
        field: Field,
        #[arg(long, default_value_t = stablecurv::oracle::DEFAULT_GRID)]
        grid_size: usize,
        /// Print coefficients instead of values on the grid.
        #[arg(long)]
        coefficients: bool,
    },
    /// Recompute every reference number and compare it with its tolerance (JSON).
    Report,
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Solver(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Solver(m) => write!(f, "solver error: {m}"),
        }
    }
}

impl From<stablecurv::Error> for CliError {
    fn from(e: stablecurv::Error) -> Self {
        use stablecurv::Error as E;
        match e {
            E::Domain(_) | E::Parse(_) | E::DimensionMismatch { .. } => CliError::Config(e.to_string()),
            _ => CliError::Solver(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("output: {e}"))
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Solver(_) => EXIT_SOLVER,
        }
    }
}

/// Progress messages go to standard error so that data pipelines only see
/// the table.
#[derive(Debug, Clone, Copy)]
pub struct Progress {
    quiet: bool,
}

impl Progress {
    pub fn new(quiet: bool) -> Self {
        Self { quiet }
    }

    pub fn note(&self, msg: impl fmt::Display) {
        if !self.quiet {
            eprintln!("{msg}");
        }
    }
}

pub fn failure_exit(failed: usize) -> i32 {
    failed.min(MAX_FAILURE_EXIT) as i32
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("configuration error: --threads must be at least 1");
            return EXIT_CONFIG;
        }
        // Fails only if a pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let progress = Progress::new(cli.quiet);
    let result = match &cli.command {
        Command::Spectrum { gamma, n } => commands::spectrum(&cli, *gamma, *n, progress).map(|_| 0),
        Command::Landscape { grid, n } => commands::landscape(&cli, grid, *n, progress).map(|_| 0),
        Command::Drift { omega_sq, n, x } => commands::drift(&cli, *omega_sq, *n, *x).map(|_| 0),
        Command::Zmatrix { h_grid, n_max, n } => commands::zmatrix(&cli, h_grid, *n_max, *n, progress).map(|_| 0),
        Command::Oracle { gamma, omega_sq, f, field, grid_size, coefficients } => {
            commands::oracle(&cli, *gamma, *omega_sq, f, *field, *grid_size, *coefficients).map(|_| 0)
        }
        Command::Verify { only, list, gamma, h, n } => {
            let opts = verify::VerifyOptions { gamma: *gamma, h: *h, n: *n, seed: cli.seed };
            if *list {
                verify::list().map(|_| 0)
            } else {
                verify::run(&cli, only.as_deref(), &opts, progress).map(failure_exit)
            }
        }
        Command::Report => report::run(&cli, progress).map(failure_exit),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
